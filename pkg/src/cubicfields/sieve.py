"""Squarefree k-tuple sieve over an arithmetic progression.

Given offsets d_1 = 0, ..., d_k and a progression t = a (mod q), keep the
t in [x, (1 + alpha) x] such that, for every j,

  (i)  no prime p with floor < p <= z divides g(t + d_j), and
  (ii) no prime p with z < p <= 2 (1 + alpha) x / sqrt(z) has p^2 | g(t + d_j),

where ``floor`` is the small-prime bound already excluded by the
progression. Roots of g mod p and p^2 come from 4 g(T) = (2T + 3)^2 + 27.

The window is handled in index space i -> t0 + i q, in segments; each
(prime power, root, offset) triple becomes one arithmetic progression of
indices to clear.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import InternalConsistencyError
from .fields import g_eval
from .numcore import factorize, is_squarefree, primes_up_to, sqrt_mod

SEGMENT = 1 << 16
BRUTE_FORCE_LIMIT = 10**6


def default_z(q: int, x: int, k: int) -> int:
    return math.floor(q * q * math.log(x) ** (4 * k))


@dataclass(frozen=True)
class SieveSpec:
    x: int
    alpha: float
    a: int
    q: int
    offsets: tuple[int, ...]
    small_prime_floor: float
    z: int | None = None
    epsilon: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(int(d) for d in self.offsets))
        if self.z is None:
            object.__setattr__(self, "z", default_z(self.q, self.x, self.k))
            object.__setattr__(self, "_overridden", False)
        else:
            object.__setattr__(self, "_overridden", self.z != default_z(self.q, self.x, self.k))
        self.validate()

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def z_overridden(self) -> bool:
        return self._overridden

    def validate(self):
        if self.x < 2:
            raise ValueError("x must be at least 2")
        if not 0.02 <= self.alpha <= 1:
            raise ValueError("alpha must lie in [0.02, 1]")
        if self.q < 1:
            raise ValueError("q must be positive")
        if not self.offsets or self.offsets[0] != 0:
            raise ValueError("offsets must be nonempty with first offset 0")
        if any(d < 0 for d in self.offsets):
            raise ValueError("offsets must be nonnegative")
        if len(set(self.offsets)) != len(self.offsets):
            raise ValueError("offsets must be distinct")
        if self.z < 1:
            raise ValueError("z must be positive")
        # every t = a (mod q) must keep g(t + d_j) free of primes <= floor
        for p in primes_up_to(math.floor(self.small_prime_floor)):
            rts = g_roots_mod(p)
            if not rts:
                continue
            if self.q % p:
                raise ValueError(f"prime {p} <= floor can divide g on the progression; {p} must divide q")
            for d in self.offsets:
                if (self.a + d) % p in rts:
                    raise ValueError(f"g(a + {d}) is divisible by {p} <= floor")

    @property
    def _alpha_exact(self) -> Fraction:
        # decimal reading, so alpha=0.03 puts 103 inside [100, 1.03 * 100]
        return Fraction(repr(float(self.alpha)))

    def window(self) -> tuple[int, int]:
        hi = math.floor(self.x * (1 + self._alpha_exact))
        return self.x, hi

    def progression(self) -> tuple[int, int]:
        """First progression element in the window and the element count."""
        lo, hi = self.window()
        t0 = lo + (self.a - lo) % self.q
        n = 0 if t0 > hi else (hi - t0) // self.q + 1
        return t0, n

    # stage membership, with exact rational comparisons
    def in_stage1(self, p: int) -> bool:
        return Fraction(self.small_prime_floor) < p <= self.z

    def in_stage2(self, p: int) -> bool:
        # p <= 2 (1+alpha) x / sqrt(z)  <=>  p^2 z <= 4 (1+alpha)^2 x^2
        return p > self.z and p * p * self.z <= 4 * (1 + self._alpha_exact) ** 2 * self.x**2

    def stage2_bound(self) -> int:
        # largest integer p with in_stage2-style bound
        b = 2 * (1 + self._alpha_exact) * self.x
        m = math.isqrt(math.floor(b * b / self.z))
        while (m + 1) ** 2 * self.z <= b * b:
            m += 1
        while m > 0 and m * m * self.z > b * b:
            m -= 1
        return m


@dataclass
class SieveResult:
    spec: SieveSpec
    survivors: list[int]
    counts: dict[str, int] = field(default_factory=dict)
    certified: bool = False

    @property
    def N_alpha(self) -> int:
        return len(self.survivors)


# ---------------------------------------------------------------------------
# roots of g modulo p and p^2


def g_roots_mod(p: int) -> tuple[int, ...]:
    """Residues T mod p with g(T) = 0 (mod p)."""
    if p == 2:
        return ()
    if p == 3:
        return (0,)
    s = sqrt_mod(-27 % p, p)
    if s is None:
        return ()
    inv2 = (p + 1) // 2
    return tuple(sorted({(s - 3) * inv2 % p, (-s - 3) * inv2 % p}))


def g_roots_mod_square(p: int) -> tuple[int, ...]:
    """Residues T mod p^2 with g(T) = 0 (mod p^2)."""
    m = p * p
    if p <= 3:
        return tuple(T for T in range(m) if g_eval(T) % m == 0)
    out = []
    for r in g_roots_mod(p):
        # Hensel: g'(r) = 2r + 3 is a unit since p does not divide 27
        out.append((r - g_eval(r) * pow(2 * r + 3, -1, m)) % m)
    return tuple(sorted(out))


def killed_residues(p: int, offsets, square: bool = False) -> set[int]:
    m = p * p if square else p
    rts = g_roots_mod_square(p) if square else g_roots_mod(p)
    return {(r - d) % m for r in rts for d in offsets}


# ---------------------------------------------------------------------------


def _index_starts(spec, t0, n, moduli_residues):
    """Turn (modulus, residue-of-t) pairs into index progressions over [0, n)."""
    starts, steps, full = [], [], False
    q = spec.q
    for m, c in moduli_residues:
        gq = math.gcd(q, m)
        if gq == m:
            # progression constant mod m
            if (t0 - c) % m == 0:
                full = True
            continue
        if gq != 1:
            # m = p^2 with p | q: index step is p
            if (t0 - c) % gq:
                continue
            mm = m // gq
            i0 = (c - t0) // gq * pow(q // gq, -1, mm) % mm
            starts.append(i0)
            steps.append(mm)
            continue
        i0 = (c - t0) * pow(q, -1, m) % m
        if i0 < n:
            starts.append(i0)
            steps.append(m)
    return starts, steps, full


def _plan(spec, t0, n):
    """Index progressions for both stages, plus the effective stage limits."""
    if n == 0:
        return [], [], False, 0
    hi_t = t0 + (n - 1) * spec.q
    g_max = g_eval(hi_t + max(spec.offsets))
    root_max = math.isqrt(g_max)
    floor = math.floor(spec.small_prime_floor)
    lim1 = min(spec.z, root_max)
    lim2 = min(spec.stage2_bound(), root_max)
    pairs = []
    for p in primes_up_to(max(lim1, lim2)):
        if p <= floor:
            continue
        if p <= lim1:
            pairs.extend((p, c) for c in killed_residues(p, spec.offsets))
        elif spec.z < p <= lim2:
            m = p * p
            pairs.extend((m, c) for c in killed_residues(p, spec.offsets, square=True))
    starts, steps, full = _index_starts(spec, t0, n, pairs)
    return starts, steps, full, lim1


def _post_filter(spec, ts, lim1, counts):
    """Apply the large-z rule and, for overridden z, the squarefree oracle."""
    out = []
    big_z = spec.z > lim1
    for t in ts:
        vals = [g_eval(t + d) for d in spec.offsets]
        if big_z and any(v <= spec.z for v in vals):
            # after marking every prime factor of v exceeds sqrt(v), so v is prime
            counts["stage1_prime_check"] += 1
            continue
        if spec.z_overridden:
            if not all(is_squarefree(v) for v in vals):
                counts["oracle_removed"] += 1
                continue
        else:
            for v in vals:
                r = math.isqrt(v)
                if r * r == v:
                    raise InternalConsistencyError(f"g({t}) = {v} is a perfect square")
        out.append(t)
    return out


def _run(spec, materialize=True, segment=SEGMENT):
    t0, n = spec.progression()
    counts = {"window": n, "marked": 0, "stage1_prime_check": 0, "oracle_removed": 0}
    starts, steps, full, lim1 = _plan(spec, t0, n)
    if full:
        counts["marked"] = n
        return [], counts, 0
    starts = np.asarray(starts, dtype=np.int64)
    steps = np.asarray(steps, dtype=np.int64)
    survivors = []
    total = 0
    for lo in range(0, n, segment):
        mask = np.ones(min(segment, n - lo), dtype=bool)
        if starts.size:
            kernels.mark_segment(mask, lo, starts, steps)
        idx = np.flatnonzero(mask)
        counts["marked"] += mask.size - idx.size
        ts = [t0 + (lo + int(i)) * spec.q for i in idx]
        kept = _post_filter(spec, ts, lim1, counts)
        total += len(kept)
        if materialize:
            survivors.extend(kept)
    return survivors, counts, total


def sieve_survivors(spec: SieveSpec) -> SieveResult:
    survivors, counts, _ = _run(spec)
    return SieveResult(spec, survivors, counts, certified=spec.z_overridden)


def count_in_window(spec: SieveSpec) -> int:
    return _run(spec, materialize=False)[2]


def brute_force_survivors(spec: SieveSpec) -> SieveResult:
    """Same filter, decided by factorizing every g(t + d_j) directly."""
    t0, n = spec.progression()
    if spec.window()[1] - spec.window()[0] > BRUTE_FORCE_LIMIT:
        raise ValueError(f"window longer than {BRUTE_FORCE_LIMIT}")
    survivors = []
    removed = 0
    for i in range(n):
        t = t0 + i * spec.q
        ok = True
        for d in spec.offsets:
            fac = factorize(g_eval(t + d))
            for p, e in fac.factors:
                if spec.in_stage1(p) or (e >= 2 and spec.in_stage2(p)):
                    ok = False
                    break
            if ok and spec.z_overridden and not fac.is_squarefree():
                ok = False
            if not ok:
                break
        if ok:
            survivors.append(t)
        else:
            removed += 1
    return SieveResult(spec, survivors, {"window": n, "removed": removed}, certified=spec.z_overridden)
