"""Drivers: class-number census over the family, and k-tuples of close fields."""

from __future__ import annotations

import logging
import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from scipy.stats import spearmanr

from .characters import SplittingType, build_character, field_is_valid, splitting_type
from .construct import TupleConstruction, build_construction, require_splitting_primes
from .fields import g_eval
from .lfunc import (
    CONJECTURAL_CONSTANT,
    EXACT_COST_LIMIT,
    GRH_CONSTANT,
    THRESHOLD_CONSTANT,
    class_number,
    extremality_ratio,
)
from .numcore import is_probable_prime
from .sieve import SieveSpec, sieve_survivors

log = logging.getLogger(__name__)

ALPHA = (9 / 8) ** 0.25 - 1
GAP_TOLERANCE = 0.05
THREADS_ENV = "CUBICFIELDS_THREADS"
REFERENCE_LINES = {
    "threshold_4_91": THRESHOLD_CONSTANT,
    "conjectural_16_91": CONJECTURAL_CONSTANT,
    "grh_64_91": GRH_CONSTANT,
}


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class CensusRow:
    t: int
    conductor: int
    discriminant: int
    regulator: float
    abs_L: float
    h: int
    ratio: float
    split_bound: int
    backend: str
    raw: float


def split_bound(t: int) -> int:
    """Largest P such that every prime 5 <= p <= P splits in K_t (4 if 5 does not)."""
    p = 5
    while True:
        if is_probable_prime(p) and splitting_type(t, p) is not SplittingType.SPLIT:
            return p - 1
        p += 2


def census_row(t: int, backend: str = "exact", A: float = 4.0, Q: float | None = None) -> CensusRow:
    cn = class_number(t, backend, A=A, Q=Q)
    d = g_eval(t) ** 2
    return CensusRow(
        t=t,
        conductor=g_eval(t),
        discriminant=d,
        regulator=cn.regulator,
        abs_L=cn.abs_L,
        h=cn.h,
        ratio=extremality_ratio(t, cn.h),
        split_bound=split_bound(t),
        backend=backend,
        raw=cn.raw,
    )


def _row_job(args):
    return census_row(*args)


def _rows(jobs, threads):
    if threads <= 1 or len(jobs) < 2:
        return [census_row(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(_row_job, jobs, chunksize=max(1, len(jobs) // (4 * threads))))


@dataclass
class CensusSummary:
    rows: int
    counts_at_or_above: dict[str, int]
    spearman_split_vs_ratio: float
    median_ratio_by_split_bound: dict[int, float]
    backend: str
    A: float
    Q: float | None


def count_at_or_above(rows, c: float) -> int:
    return sum(1 for r in rows if r.ratio >= c)


def summarize(rows, backend, A, Q) -> CensusSummary:
    counts = {name: count_at_or_above(rows, c) for name, c in REFERENCE_LINES.items()}
    if len(rows) > 2:
        rho = float(spearmanr([r.split_bound for r in rows], [r.ratio for r in rows]).statistic)
    else:
        rho = float("nan")
    groups: dict[int, list[float]] = {}
    for r in rows:
        groups.setdefault(r.split_bound, []).append(r.ratio)
    medians = {b: statistics.median(v) for b, v in sorted(groups.items())}
    return CensusSummary(len(rows), counts, rho, medians, backend, A, Q)


def run_census(t_max: int, A: float = 4.0, backend: str = "exact", threads: int | None = None):
    """One row per t <= t_max with 3 not dividing t and g(t) squarefree.

    Returns ``(rows, summary)``. The euler backend uses Q = sqrt(2 x) with
    x = g(t_max)^2, the largest discriminant in range.
    """
    if backend not in ("exact", "euler"):
        raise ValueError(f"unknown backend {backend!r}")
    if t_max < 0:
        raise ValueError("t_max must be nonnegative")
    if backend == "exact" and g_eval(t_max) > EXACT_COST_LIMIT:
        raise ValueError(
            f"exact backend needs conductors <= {EXACT_COST_LIMIT}; g({t_max}) = {g_eval(t_max)}"
        )
    Q = math.sqrt(2) * g_eval(t_max) if backend == "euler" else None
    ts = [t for t in range(t_max + 1) if field_is_valid(t)]
    log.info("census over %d fields, backend %s", len(ts), backend)
    rows = _rows([(t, backend, A, Q) for t in ts], threads or default_threads())
    return rows, summarize(rows, backend, A, Q)


# ---------------------------------------------------------------------------
# tuples


def gap_exponent(D_small: int, D_large: int) -> float:
    if D_small < 16:
        raise ValueError("discriminants must be at least 16")
    if D_large == D_small:
        raise ValueError("equal discriminants: fields are not distinct")
    if D_large < D_small:
        raise ValueError("D_large must exceed D_small")
    return math.log(D_large - D_small) / math.log(D_small)


def _iroot4_ceil(x):
    r = math.isqrt(math.isqrt(x))
    while r**4 < x:
        r += 1
    return r


@dataclass
class TupleReport:
    construction: TupleConstruction
    k: int
    x: int
    epsilon: float
    alpha: float
    X: Fraction
    window: tuple[int, int]
    z: int
    z_mode: str
    sieve_counts: dict[str, int]
    tuples: list[list[CensusRow]] = field(default_factory=list)
    gap_exponents: list[float] = field(default_factory=list)
    in_window: list[bool] = field(default_factory=list)
    splitting_ok: list[bool] = field(default_factory=list)
    status: str = "ok"
    gap_threshold: float = 0.75 + GAP_TOLERANCE

    @property
    def empty(self) -> bool:
        return not self.tuples


def run_tuples(
    k: int,
    x: int,
    epsilon: float,
    A: float = 4.0,
    backend: str = "euler",
    z: int | str = "desk",
    max_tuples: int | None = None,
    threads: int | None = None,
) -> TupleReport:
    """Sieve t in [x^(1/4), (1+alpha) x^(1/4)], t = a_1 (mod q), and report the
    k-tuples (K_{t+d_1}, ..., K_{t+d_k}) whose conductors are all squarefree.

    ``z="desk"`` empties stage (i) (z = floor) and relies on the squarefree
    oracle, since the default z = q^2 (log x)^{4k} exceeds every g value at
    desk scale. ``z="default"`` uses that formula; an int overrides it.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    c = build_construction(k, epsilon, x)
    require_splitting_primes(c)
    x_t = _iroot4_ceil(int(x))
    base = min(range(k), key=lambda j: c.a[j])
    order = [base] + [j for j in range(k) if j != base]
    offsets = tuple(c.a[j] - c.a[base] for j in order)
    floor = c.bound
    if z == "desk":
        z_val, mode = max(1, math.floor(floor)), "desk"
    elif z == "default":
        z_val, mode = None, "default"
    else:
        z_val, mode = int(z), "override"
    spec = SieveSpec(x_t, ALPHA, c.a[base], c.q, offsets, floor, z_val, epsilon)
    res = sieve_survivors(spec)
    X = Fraction(3, 4) * x
    report = TupleReport(
        construction=c,
        k=k,
        x=int(x),
        epsilon=epsilon,
        alpha=ALPHA,
        X=X,
        window=spec.window(),
        z=spec.z,
        z_mode=mode,
        sieve_counts=dict(res.counts),
    )
    survivors = res.survivors[:max_tuples] if max_tuples else res.survivors
    if not survivors:
        report.status = "no tuples at this scale"
        return report

    # field parameters T_j in the construction's j order
    inv = {j: i for i, j in enumerate(order)}
    params = [[s + offsets[inv[j]] for j in range(k)] for s in survivors]
    flat = sorted({T for ps in params for T in ps})
    Q = max(math.sqrt(2 * x), max(g_eval(T) for T in flat))
    if backend == "exact" and max(g_eval(T) for T in flat) > EXACT_COST_LIMIT:
        raise ValueError(f"exact backend needs conductors <= {EXACT_COST_LIMIT}")
    rows = dict(zip(flat, _rows([(T, backend, A, Q) for T in flat], threads or default_threads())))

    split_primes = c.splitting_primes
    for ps in params:
        tup = sorted((rows[T] for T in ps), key=lambda r: r.discriminant)
        report.tuples.append(tup)
        ds = [r.discriminant for r in tup]
        gaps = [gap_exponent(ds[i], ds[i + 1]) for i in range(len(ds) - 1)]
        if gaps:
            report.gap_exponents.append(max(gaps))
        report.in_window.append(all(X <= D <= 2 * X for D in ds))
        report.splitting_ok.append(
            all(splitting_type(T, p) is SplittingType.SPLIT for T in ps for p in split_primes)
        )
    return report


def row_dict(r: CensusRow) -> dict:
    return asdict(r)
