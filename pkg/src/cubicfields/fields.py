"""Shanks' simplest cubic fields K_t, generated by a root of

    f_t(x) = x^3 - t x^2 - (t + 3) x - 1,

whose polynomial discriminant is g(t)^2 with g(t) = t^2 + 3t + 9.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .numcore import is_squarefree

DEFAULT_PRECISION_BITS = 96


def g_eval(t: int) -> int:
    return t * t + 3 * t + 9


def f_eval(t, x):
    return x**3 - t * x**2 - (t + 3) * x - 1


@dataclass(frozen=True)
class SimplestCubicField:
    t: int
    conductor: int
    squarefree_conductor: bool
    discriminant: int | None

    @classmethod
    def from_t(cls, t: int) -> "SimplestCubicField":
        if t < 0:
            raise ValueError("t must be nonnegative")
        g = g_eval(t)
        sf = _squarefree_g(t)
        return cls(t, g, sf, g * g if sf else None)


@lru_cache(maxsize=65536)
def _squarefree_g(t):
    return is_squarefree(g_eval(t))


def discriminant(t: int) -> int | None:
    """g(t)^2 when g(t) is squarefree, else None."""
    return SimplestCubicField.from_t(t).discriminant


@dataclass(frozen=True)
class RootTriple:
    """Real roots of f_t as mpmath numbers, rho1 in (t+1, t+2), rho2 in (-2, -1), rho3 in (-1, 0).

    ``errors[i]`` bounds ``|rho_i - true root|``; each bound is certified by a
    sign change of f_t across ``rho_i -/+ errors[i]``.
    """

    t: int
    rho1: mpmath.mpf
    rho2: mpmath.mpf
    rho3: mpmath.mpf
    errors: tuple[float, float, float]
    precision_bits: int

    def __iter__(self):
        return iter((self.rho1, self.rho2, self.rho3))

    @property
    def error(self) -> float:
        return max(self.errors)

    def as_floats(self) -> tuple[float, float, float]:
        return float(self.rho1), float(self.rho2), float(self.rho3)


def _brackets(t):
    # f(-2) = -2t-3 < 0, f(-1) = 1 > 0, f(0) = -1 < 0,
    # f(t+1) = -2t-3 < 0, f(t+2) = t^2+3t+1 > 0
    return ((t + 1, t + 2), (-2, -1), (-1, 0))


def _refine(t, lo, hi, target, bits):
    f = lambda x: f_eval(t, x)
    df = lambda x: 3 * x * x - 2 * t * x - (t + 3)
    lo, hi = mpmath.mpf(lo), mpmath.mpf(hi)
    flo, fhi = f(lo), f(hi)
    if flo * fhi >= 0:
        raise ArithmeticError(f"no sign change for f_{t} on [{lo}, {hi}]")
    for _ in range(12):
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            lo = hi = mid
            break
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    x = (lo + hi) / 2
    floor = mpmath.ldexp(abs(x) + mpmath.mpf(2) ** -40, -(bits - 8))
    for _ in range(200):
        step = f(x) / df(x)
        x -= step
        if abs(step) <= floor:
            break
    else:
        raise ArithmeticError(f"Newton did not converge for f_{t} near {x}")
    err = max(2 * abs(f(x) / df(x)), floor)
    for _ in range(60):
        if f(x - err) * f(x + err) < 0:
            break
        err *= 2
    else:
        raise ArithmeticError(f"could not certify root of f_{t} near {x}")
    if err > target:
        raise ArithmeticError(
            f"root of f_{t} near {mpmath.nstr(x, 20)} certified only to {float(err):.3g}, "
            f"target {target:.3g}; raise precision_bits"
        )
    return x, float(err)


def roots(t: int, target_precision: float = 1e-15, precision_bits: int = DEFAULT_PRECISION_BITS) -> RootTriple:
    """Three real roots of f_t in bracket order, each within ``target_precision``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if not target_precision > 0:
        raise ValueError("target_precision must be positive")
    with mpmath.workprec(precision_bits):
        found = [_refine(t, lo, hi, target_precision, precision_bits) for lo, hi in _brackets(t)]
    (r1, e1), (r2, e2), (r3, e3) = found
    return RootTriple(t, r1, r2, r3, (e1, e2, e3), precision_bits)


@dataclass(frozen=True)
class RegulatorValue:
    value: float
    error: float

    def __float__(self):
        return self.value


@lru_cache(maxsize=16384)
def regulator(t: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> RegulatorValue:
    """Regulator of the unit group generated by rho and -1/(1+rho).

    Only defined here for squarefree g(t), where these two units are taken to
    generate the full unit group.
    """
    if not SimplestCubicField.from_t(t).squarefree_conductor:
        raise ValueError(f"g({t}) = {g_eval(t)} is not squarefree")
    rt = roots(t, precision_bits=precision_bits)
    with mpmath.workprec(precision_bits):
        r1, r2 = rt.rho1, rt.rho2
        a, b = mpmath.log(abs(r1)), mpmath.log(abs(r2))
        c, d = -mpmath.log(abs(1 + r1)), -mpmath.log(abs(1 + r2))
        det = abs(a * d - b * c)
        e1, e2 = rt.errors[0], rt.errors[1]
        # first-order propagation of the root errors through the determinant
        da, db = e1 / abs(r1), e2 / abs(r2)
        dc, dd = e1 / abs(1 + r1), e2 / abs(1 + r2)
        err = abs(d) * da + abs(a) * dd + abs(c) * db + abs(b) * dc
        err += abs(det) * mpmath.mpf(2) ** -(precision_bits - 8)
    return RegulatorValue(float(det), float(err))
