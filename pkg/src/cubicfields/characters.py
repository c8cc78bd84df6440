"""Prime splitting in K_t and the primitive cubic character attached to K_t."""

from __future__ import annotations

import cmath
import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import InternalConsistencyError, UnderdeterminedError
from .fields import SimplestCubicField, g_eval
from .numcore import factorize, is_probable_prime, primes_up_to, primitive_root

OMEGA = cmath.exp(2j * math.pi / 3)
OMEGA_BAR = OMEGA.conjugate()
CUBE_ROOTS = (1 + 0j, OMEGA, OMEGA_BAR)

DEFAULT_TEST_PRIMES = 25
_SCAN_LIMIT = 10_000


class SplittingType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


# ---------------------------------------------------------------------------
# root counting of f_t mod p


@lru_cache(maxsize=4096)
def _root_counts(p):
    """Root count of f_t mod p for every residue t.

    f_t(0) = -1 and f_t(-1) = 1, and each other x is a root of f_t for exactly
    one t, namely t = (x^3 - 3x - 1) / (x^2 + x); so counting preimages counts roots.
    """
    x = np.arange(1, p - 1, dtype=np.int64)
    num = (x * x % p * x - 3 * x - 1) % p
    den = (x * x + x) % p
    inv = np.ones_like(den)
    base = den.copy()
    e = p - 2
    while e:
        if e & 1:
            inv = inv * base % p
        base = base * base % p
        e >>= 1
    counts = np.bincount(num * inv % p, minlength=p).astype(np.int8)
    counts.setflags(write=False)
    return counts


def _polymulmod(a, b, t, p):
    # a, b are [c0, c1, c2] modulo f_t, where x^3 = t x^2 + (t+3) x + 1
    prod = [0] * 5
    for i in range(3):
        if a[i]:
            for j in range(3):
                prod[i + j] += a[i] * b[j]
    for k in (4, 3):
        c = prod[k] % p
        if c:
            prod[k - 1] += c * t
            prod[k - 2] += c * (t + 3)
            prod[k - 3] += c
        prod[k] = 0
    return [prod[0] % p, prod[1] % p, prod[2] % p]


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, b, p):
    a = a[:]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _count_roots_frobenius(t, p):
    # number of distinct roots = deg gcd(f_t, x^p - x)
    h, base, e = [1, 0, 0], [0, 1, 0], p
    while e:
        if e & 1:
            h = _polymulmod(h, base, t, p)
        base = _polymulmod(base, base, t, p)
        e >>= 1
    h[1] = (h[1] - 1) % p
    h = _trim(h)
    if not h:
        return 3
    a = [(-1) % p, (-(t + 3)) % p, (-t) % p, 1]
    b = h
    while b:
        a, b = b, _polymod(a, b, p)
    return len(a) - 1


def count_roots_mod_p(t: int, p: int) -> int:
    """Number of distinct roots of f_t modulo the prime p."""
    if p < _SCAN_LIMIT:
        return int(_root_counts(p)[t % p])
    return _count_roots_frobenius(t % p, p)


def splitting_type(t: int, p: int) -> SplittingType:
    if g_eval(t) % p == 0:
        return SplittingType.RAMIFIED
    n = count_roots_mod_p(t, p)
    if n == 3:
        return SplittingType.SPLIT
    if n == 0:
        return SplittingType.INERT
    raise InternalConsistencyError(f"f_{t} has {n} roots mod {p} although {p} does not divide g({t})")


def split_residues(p: int) -> list[int]:
    """Residues t mod p for which f_t splits into three distinct linear factors."""
    if p < 5:
        raise ValueError("split_residues needs a prime p >= 5")
    return np.flatnonzero(_root_counts(p) == 3).tolist()


def split_count_formula(p: int) -> int:
    return (p - 4) // 3 if p % 3 == 1 else (p - 2) // 3


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class CubicCharacter:
    """chi(n) = omega ** sum(e_p * ind_p(n)) for n prime to the conductor.

    ``components`` holds ``(p, generator, e_p)``; ind_p is the discrete log to
    ``generator`` reduced mod 3. ``conjugate_equivalent`` records that the
    conjugate character describes the same field equally well.
    """

    t: int
    conductor: int
    components: tuple[tuple[int, int, int], ...]
    conjugate_equivalent: bool = True
    _zetas: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not self._zetas:
            z = tuple(pow(g, (p - 1) // 3, p) for p, g, _ in self.components)
            object.__setattr__(self, "_zetas", z)

    def conjugate(self) -> "CubicCharacter":
        comps = tuple((p, g, 3 - e) for p, g, e in self.components)
        return CubicCharacter(self.t, self.conductor, comps, self.conjugate_equivalent)

    def exponent(self, n: int) -> int | None:
        return char_exponent(self, n)

    def __call__(self, n: int) -> complex:
        return char_eval(self, n)

    def exponent_table(self) -> np.ndarray:
        """``exps[a]`` for a in [0, q): exponent of chi(a), -1 where chi(a) = 0."""
        return _exponent_table(self.components, self.conductor)


def _cubic_index(n, p, zeta):
    v = pow(n, (p - 1) // 3, p)
    if v == 1:
        return 0
    if v == zeta:
        return 1
    if v == zeta * zeta % p:
        return 2
    raise InternalConsistencyError(f"{n}^((p-1)/3) mod {p} is not a cube root of unity")


def char_exponent(chi: CubicCharacter, n: int) -> int | None:
    n = int(n)
    if math.gcd(n, chi.conductor) != 1:
        return None
    total = 0
    for (p, _, e), zeta in zip(chi.components, chi._zetas):
        total += e * _cubic_index(n % p, p, zeta)
    return total % 3


def char_eval(chi: CubicCharacter, n: int) -> complex:
    k = char_exponent(chi, n)
    return 0j if k is None else CUBE_ROOTS[k]


@lru_cache(maxsize=256)
def _index_table(p, gen):
    table = kernels.cubic_index_table(p, gen)
    table.setflags(write=False)
    return table


def _exponent_table(components, q):
    a = np.arange(q, dtype=np.int64)
    acc = np.zeros(q, dtype=np.int64)
    zero = np.zeros(q, dtype=bool)
    for p, gen, e in components:
        v = _index_table(p, gen)[a % p]
        zero |= v < 0
        acc += e * v.astype(np.int64)
    out = (acc % 3).astype(np.int8)
    out[zero] = -1
    return out


def _test_primes(q, bound):
    if bound is None:
        out = []
        for r in itertools.count(2):
            if is_probable_prime(r) and q % r:
                out.append(r)
                if len(out) == DEFAULT_TEST_PRIMES:
                    return out
    return [r for r in primes_up_to(bound) if q % r]


@lru_cache(maxsize=16384)
def build_character(t: int, test_prime_bound: int | None = None) -> CubicCharacter:
    """The cubic character mod g(t) whose kernel primes are the split primes of K_t.

    The exponent vector is found by exhaustive search with the smallest
    conductor prime's exponent fixed to 1, which picks one member of the
    conjugate pair. Test primes are all primes up to ``test_prime_bound``
    prime to g(t), or the first 25 such primes when no bound is given.
    """
    if t % 3 == 0:
        raise ValueError(f"3 divides t={t}, so 9 divides g(t)")
    q = g_eval(t)
    fac = factorize(q)
    if not fac.is_squarefree():
        raise ValueError(f"g({t}) = {q} is not squarefree")
    ps = fac.primes
    for p in ps:
        if p % 3 != 1:
            raise InternalConsistencyError(f"conductor prime {p} of g({t}) is not 1 mod 3")
    gens = [primitive_root(p) for p in ps]
    zetas = [pow(g, (p - 1) // 3, p) for p, g in zip(ps, gens)]

    data = []
    for r in _test_primes(q, test_prime_bound):
        split = splitting_type(t, r) is SplittingType.SPLIT
        data.append((split, [_cubic_index(r % p, p, z) for p, z in zip(ps, zetas)]))

    fits = []
    for tail in itertools.product((1, 2), repeat=len(ps) - 1):
        ev = (1,) + tail
        if all((sum(e * i for e, i in zip(ev, ind)) % 3 == 0) == split for split, ind in data):
            fits.append(ev)
    if not fits:
        raise InternalConsistencyError(f"no cubic character mod {q} matches the splitting of K_{t}")
    if len(fits) > 1:
        raise UnderdeterminedError(
            f"{len(fits)} exponent vectors fit the {len(data)} test primes for t={t}; "
            "pass a larger test_prime_bound"
        )
    comps = tuple((p, g, e) for p, g, e in zip(ps, gens, fits[0]))
    return CubicCharacter(t, q, comps)


def field_is_valid(t: int) -> bool:
    """3 does not divide t and g(t) is squarefree: the fields the formulas cover."""
    return t % 3 != 0 and SimplestCubicField.from_t(t).squarefree_conductor
