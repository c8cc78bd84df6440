"""L(1, chi) for the cubic characters of K_t, and class numbers from

    h = sqrt(d) * |L(1, chi)|^2 / (4 R).

Three evaluators: a truncated Euler product (cheap, approximate), the closed
form through the Gauss sum (exact up to rounding, O(q)), and the plain
Dirichlet series (slow, used as an independent check).
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass

from . import kernels
from .characters import CubicCharacter, SplittingType, build_character, char_exponent, splitting_type
from .errors import IntegralityError
from .fields import SimplestCubicField, g_eval, regulator
from .numcore import primes_up_to

EULER_GAMMA = 0.57721566490153286061
E2G = math.exp(2 * EULER_GAMMA)
THRESHOLD_CONSTANT = 4 / 91 * E2G
CONJECTURAL_CONSTANT = 16 / 91 * E2G
GRH_CONSTANT = 64 / 91 * E2G
# |1 - omega/2|^-1 |1 - omega/3|^-1
SMALL_PRIME_FACTOR = 6 / math.sqrt(91)

EXACT_COST_LIMIT = 10**7
INTEGRALITY_TOL = 1e-3
_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class EulerTruncated:
    A: float
    Q: float
    cutoff: int


@dataclass(frozen=True)
class ExactGaussSum:
    pass


@dataclass(frozen=True)
class DirectSeries:
    N: int


@dataclass(frozen=True)
class LEvaluation:
    value: complex
    abs_value: float
    method: EulerTruncated | ExactGaussSum | DirectSeries
    error_estimate: float
    conjugate_ambiguous: bool = True
    empty_product: bool = False


def euler_cutoff(A: float, Q: float) -> int:
    if Q <= 1:
        return 0
    return math.floor(math.log(Q) ** A)


def l1_euler_truncated(source: CubicCharacter | int, A: float, Q: float) -> LEvaluation:
    """prod_{p <= (log Q)^A} (1 - chi(p)/p)^-1.

    ``source`` is either a character, giving the complex product, or a field
    parameter t, in which case only splitting types are used: the modulus is
    exact and ``value`` is reported as the (real) modulus.
    """
    if A < 1:
        raise ValueError("A must be at least 1")
    if isinstance(source, CubicCharacter):
        q, chi, t = source.conductor, source, source.t
    else:
        t, chi = int(source), None
        q = g_eval(t)
    if Q < q:
        raise ValueError(f"Q={Q} is below the conductor {q}")
    cutoff = euler_cutoff(A, Q)
    method = EulerTruncated(A, Q, cutoff)
    if cutoff < 2:
        return LEvaluation(1 + 0j, 1.0, method, 0.0, chi is None, empty_product=True)
    err_scale = 1 / math.log(math.log(Q))
    if chi is not None:
        re, im = [], []
        for p in primes_up_to(cutoff):
            k = char_exponent(chi, p)
            if k is None:
                continue
            z = cmath.log(1 - cmath.exp(2j * math.pi * k / 3) / p)
            re.append(-z.real)
            im.append(-z.imag)
        value = cmath.exp(complex(math.fsum(re), math.fsum(im)))
        return LEvaluation(value, abs(value), method, abs(value) * err_scale, False)
    logs = []
    for p in primes_up_to(cutoff):
        st = splitting_type(t, p)
        if st is SplittingType.SPLIT:
            logs.append(-math.log1p(-1 / p))
        elif st is SplittingType.INERT:
            logs.append(-0.5 * math.log1p(1 / p + 1 / (p * p)))
    mod = math.exp(math.fsum(logs))
    return LEvaluation(complex(mod), mod, method, mod * err_scale, True)


def _check_exact(chi):
    q = chi.conductor
    if q > EXACT_COST_LIMIT:
        raise ValueError(f"conductor {q} exceeds the exact-evaluation limit {EXACT_COST_LIMIT}")
    if char_exponent(chi, q - 1) != 0:
        raise ValueError("character is odd; the closed form here needs chi(-1) = 1")


def gauss_sum(chi: CubicCharacter) -> complex:
    _check_exact(chi)
    tau, _ = kernels.character_sums(chi.exponent_table(), chi.conductor)
    return tau


def l1_exact(chi: CubicCharacter) -> LEvaluation:
    """L(1, chi) = -(tau(chi)/q) * sum_a conj(chi(a)) log(2 sin(pi a / q)), chi even."""
    _check_exact(chi)
    q = chi.conductor
    tau, s = kernels.character_sums(chi.exponent_table(), q)
    value = -tau / q * s
    err = 16 * _EPS * (math.sqrt(q) + abs(s)) * (1 + math.log(q))
    return LEvaluation(value, abs(value), ExactGaussSum(), err, False)


def l1_direct_series(chi: CubicCharacter, N: int) -> LEvaluation:
    """sum_{n <= N} chi(n)/n, with the crude tail bound q log q / N."""
    q = chi.conductor
    if N < q:
        raise ValueError("N must be at least the conductor")
    value = kernels.partial_series(chi.exponent_table(), q, int(N))
    return LEvaluation(value, abs(value), DirectSeries(int(N)), q * math.log(q) / N, False)


@dataclass(frozen=True)
class ClassNumber:
    t: int
    h: int
    raw: float
    abs_L: float
    regulator: float
    backend: str


def class_number(t: int, method: str = "exact", A: float = 4.0, Q: float | None = None) -> ClassNumber:
    """Class number of K_t via sqrt(d) |L(1,chi)|^2 / (4R).

    ``method`` is ``"exact"`` (Gauss-sum closed form; result must be within
    1e-3 of a positive integer) or ``"euler"`` (truncated product with the
    given A and Q, Q defaulting to the conductor; rounded, not checked).
    """
    fld = SimplestCubicField.from_t(t)
    if t % 3 == 0 or not fld.squarefree_conductor:
        raise ValueError(f"K_{t} is outside the formula's range (g({t}) = {fld.conductor})")
    chi = build_character(t)
    if method == "exact":
        L = l1_exact(chi)
    elif method == "euler":
        L = l1_euler_truncated(chi, A, fld.conductor if Q is None else Q)
    else:
        raise ValueError(f"unknown method {method!r}")
    R = regulator(t).value
    raw = fld.conductor * L.abs_value**2 / (4 * R)
    h = round(raw)
    if method == "exact":
        if abs(raw - h) > INTEGRALITY_TOL or h < 1:
            raise IntegralityError(f"class number of K_{t} came out as {raw!r}", raw)
    else:
        h = max(1, h)
    return ClassNumber(t, h, raw, L.abs_value, R, method)


def extremality_ratio(t: int, h: int) -> float:
    """h / (sqrt(d) (log log d / log d)^2)."""
    d = SimplestCubicField.from_t(t).discriminant
    if d is None:
        raise ValueError(f"K_{t} has no discriminant in range (g(t) not squarefree)")
    if d < 16:
        raise ValueError("d must be at least 16")
    ld = math.log(d)
    return h / (math.isqrt(d) * (math.log(ld) / ld) ** 2)


def euler_lower_bound(P: int, cutoff: int) -> float:
    """Smallest truncated-product |L| for a field in which 5..P all split.

    chi(2), chi(3) are fixed non-trivial cube roots of unity; every prime in
    (P, cutoff] is assumed inert, the smallest possible factor.
    """
    logs = [math.log(SMALL_PRIME_FACTOR)]
    for p in primes_up_to(cutoff):
        if p < 5:
            continue
        if p <= P:
            logs.append(-math.log1p(-1 / p))
        else:
            logs.append(-0.5 * math.log1p(1 / p + 1 / (p * p)))
    return math.exp(math.fsum(logs))
