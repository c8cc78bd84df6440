"""CRT construction of k progressions whose fields share many split primes.

For primes p <= B = epsilon * log x:

  a_j = 2   (mod 13)     if 13 < 3k + 2
  a_j = 1   (mod p)      if p < 3k + 2, p != 13
  a_j = t_{p,j} (mod p)  if 3k + 2 <= p <= B

with t_{p,1} < ... < t_{p,k} the k smallest residues where f_t splits mod p.
Then q = prod p, d_j = a_j - a_1, and every prime in [3k + 2, B] splits in
each K_{t + d_j} for t = a_1 (mod q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .characters import SplittingType, split_residues, splitting_type
from .errors import InternalConsistencyError
from .fields import g_eval
from .numcore import crt_combine, primes_up_to


@dataclass(frozen=True)
class TupleConstruction:
    k: int
    epsilon: float
    x: int
    prime_list: tuple[int, ...]
    a: tuple[int, ...]
    q: int
    deltas: tuple[int, ...]
    split_table: dict[int, tuple[int, ...]] = field(hash=False)

    @property
    def bound(self) -> float:
        return self.epsilon * math.log(self.x)

    @property
    def splitting_primes(self) -> list[int]:
        return [p for p in self.prime_list if p >= 3 * self.k + 2]

    @property
    def degenerate(self) -> bool:
        """No prime in [3k + 2, B]: every a_j is 1 mod each p, so the k fields coincide."""
        return not self.splitting_primes

    def prescribed(self, p: int, j: int) -> int:
        """The residue a_j must have mod p."""
        if p >= 3 * self.k + 2:
            return self.split_table[p][j]
        return 2 if p == 13 else 1


def build_construction(k: int, epsilon: float, x: int) -> TupleConstruction:
    """Solve the congruence system; below B = 3k + 2 the result is ``degenerate``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    primes = primes_up_to(math.floor(epsilon * math.log(x)))
    splitting = [p for p in primes if p >= 3 * k + 2]
    table = {}
    for p in splitting:
        res = split_residues(p)
        if len(res) < k:
            raise InternalConsistencyError(f"only {len(res)} split residues mod {p}, need {k}")
        table[p] = tuple(res[:k])
    a = []
    for j in range(k):
        residues = []
        for p in primes:
            if p >= 3 * k + 2:
                residues.append(table[p][j])
            elif p == 13:
                residues.append(2)
            else:
                residues.append(1)
        r, q = crt_combine(residues, primes)
        a.append(r)
    deltas = tuple(aj - a[0] for aj in a)
    return TupleConstruction(k, epsilon, int(x), tuple(primes), tuple(a), q, deltas, table)


@dataclass
class ValidationReport:
    checked: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_construction(c: TupleConstruction, samples: int = 20, start: int = 0) -> ValidationReport:
    """Check CRT residues, non-divisibility of g and splitting on sampled t = a_1 (mod q)."""
    bad = []
    for j, aj in enumerate(c.a):
        if not 0 <= aj < c.q:
            bad.append(f"a_{j + 1} = {aj} outside [0, q)")
        for p in c.prime_list:
            if aj % p != c.prescribed(p, j):
                bad.append(f"a_{j + 1} = {aj % p} mod {p}, expected {c.prescribed(p, j)}")
    if c.deltas[0] != 0:
        bad.append("delta_1 is not 0")
    if c.q != math.prod(c.prime_list):
        bad.append("q is not the product of the listed primes")
    split_primes = c.splitting_primes
    for m in range(start, start + samples):
        t = c.a[0] + m * c.q
        for j, d in enumerate(c.deltas):
            T = t + d
            if T < 0:
                continue
            for p in c.prime_list:
                if g_eval(T) % p == 0:
                    bad.append(f"t={t}: {p} divides g(t + delta_{j + 1})")
            for p in split_primes:
                if splitting_type(T, p) is not SplittingType.SPLIT:
                    bad.append(f"t={t}: {p} does not split in K_(t + delta_{j + 1})")
    return ValidationReport(samples, bad)


def require_splitting_primes(c: TupleConstruction) -> None:
    if c.degenerate:
        raise ValueError(
            f"no splitting primes: epsilon*log x = {c.bound:.4g} leaves no prime >= 3k+2 = {3 * c.k + 2}"
        )
