"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is warmed up once (JIT compile) and then timed; results from the
two flavours are compared before timing.
"""

import argparse
import time

import numpy as np

from cubicfields import kernels
from cubicfields.characters import build_character
from cubicfields.numcore import primitive_root
from cubicfields.sieve import SieveSpec, _plan


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    chi = build_character(2000)  # conductor 4006009
    exps = chi.exponent_table()
    q = chi.conductor

    spec = SieveSpec(10**6, 0.5, 1, 6, (0, 4), 3, z=5)
    t0, n = spec.progression()
    starts, steps, _, _ = _plan(spec, t0, n)
    starts = np.asarray(starts, dtype=np.int64)
    steps = np.asarray(steps, dtype=np.int64)

    def marking(impl):
        def run():
            mask = np.ones(n, dtype=bool)
            impl(mask, 0, starts, steps)
            return int(mask.sum())

        return run

    yield "mark_segment", marking(kernels.mark_segment_nb), marking(kernels.mark_segment_np)
    yield (
        "split_counts(p=997)",
        lambda: kernels.split_counts_nb(997),
        lambda: kernels.split_counts_np(997),
    )
    yield (
        f"character_sums(q={q})",
        lambda: kernels.character_sums_nb(exps, q),
        lambda: kernels.character_sums_np(exps, q),
    )
    yield (
        f"partial_series(N={10 * q})",
        lambda: kernels.partial_series_nb(exps, q, 10 * q),
        lambda: kernels.partial_series_np(exps, q, 10 * q),
    )
    p = 1000003
    gen = primitive_root(p)
    yield (
        f"cubic_index_table(p={p})",
        lambda: kernels.cubic_index_table_nb(p, gen),
        lambda: kernels.cubic_index_table_np(p, gen),
    )


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    if isinstance(a, complex):
        return abs(a - b) <= 1e-9 * max(1.0, abs(a))
    return a == b


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':34s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s}")
    for name, nb_fn, np_fn in cases():
        if not same(nb_fn(), np_fn()):
            raise SystemExit(f"{name}: numba and numpy results differ")
        t_nb = best_of(nb_fn, args.repeat)
        t_np = best_of(np_fn, args.repeat)
        print(f"{name:34s} {t_nb:11.5f} {t_np:11.5f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
