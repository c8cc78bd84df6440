"""Integer utilities: primes, CRT, factorization, square roots mod p.

All functions take and return Python ints, so magnitudes are unbounded.
Primality is proven (deterministic Miller-Rabin bases) for n < 3.3e24, which
covers every conductor and discriminant this package produces; above that the
test is probabilistic with 20 fixed bases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TRIAL_BOUND = 4096
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_EXTRA = (43, 47, 53, 59, 61, 67, 71)
_MR_PROVEN_LIMIT = 3317044064679887385961981


def primes_up_to(limit: int) -> list[int]:
    """Primes ``p <= limit`` in ascending order (sieve of Eratosthenes)."""
    return _prime_array(int(limit)).tolist()


def _prime_array(limit):
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@lru_cache(maxsize=1)
def _trial_primes():
    return tuple(primes_up_to(TRIAL_BOUND))


def crt_combine(residues, moduli) -> tuple[int, int]:
    """Smallest nonnegative ``r`` with ``r = residues[i] mod moduli[i]`` for all i.

    Returns ``(r, prod(moduli))``. Moduli must be positive and pairwise coprime.
    """
    residues = [int(r) for r in residues]
    moduli = [int(m) for m in moduli]
    if len(residues) != len(moduli):
        raise ValueError("residues and moduli differ in length")
    if not moduli:
        raise ValueError("need at least one congruence")
    if any(m <= 0 for m in moduli):
        raise ValueError("moduli must be positive")
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            if math.gcd(moduli[i], moduli[j]) != 1:
                raise ValueError(f"moduli {moduli[i]} and {moduli[j]} are not coprime")
    r, m = 0, 1
    for ri, mi in zip(residues, moduli):
        # solve r + m*s = ri (mod mi)
        s = (ri - r) * pow(m, -1, mi) % mi
        r += m * s
        m *= mi
    return r % m, m


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_PROVEN_LIMIT else _MR_BASES + _MR_EXTRA
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n):
    # Pollard-Brent with deterministic seeds; n odd composite, not a prime power
    for c in range(1, 200):
        y, r, q, m = 2, 1, 1, 128
        g = x = ys = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise RuntimeError(f"Pollard rho failed on {n}")


def _split(n, out):
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _brent(n)
    _split(d, out)
    _split(n // d, out)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


def factorize(n: int) -> Factorization:
    """Complete factorization: trial division by primes below ``TRIAL_BOUND``,
    then Miller-Rabin and Pollard-Brent on the cofactor."""
    n = int(n)
    if n <= 0:
        raise ValueError("factorize needs n >= 1")
    out: dict[int, int] = {}
    m = n
    for p in _trial_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
    if m > 1:
        _split(m, out)
    return Factorization(n, tuple(sorted(out.items())))


def is_squarefree(n: int) -> bool:
    if n < 1:
        raise ValueError("is_squarefree needs n >= 1")
    m = n
    for p in _trial_primes():
        if p * p > m:
            return True
        if m % p == 0:
            m //= p
            if m % p == 0:
                return False
    if m == 1 or is_probable_prime(m):
        return True
    return factorize(m).is_squarefree()


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of ``a`` modulo the odd prime ``p`` (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


@lru_cache(maxsize=4096)
def primitive_root(p: int) -> int:
    """Smallest primitive root modulo the prime ``p``."""
    if p == 2:
        return 1
    qs = factorize(p - 1).primes
    g = 2
    while any(pow(g, (p - 1) // r, p) == 1 for r in qs):
        g += 1
    return g
