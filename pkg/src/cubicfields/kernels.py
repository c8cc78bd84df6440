"""Hot inner loops, each in a numba flavour and a pure-numpy flavour.

The public names (``mark_segment``, ``split_counts``, ``character_sums``,
``partial_series``, ``cubic_index_table``) are bound to the numba versions
when :data:`cubicfields._jit.USE_NUMBA` is true and to the numpy versions
otherwise. Both flavours are importable under ``*_nb`` / ``*_np`` so tests
and the benchmark can compare them directly.

Character values are passed around as exponent arrays: ``exps[a]`` is ``e``
with ``chi(a) = omega**e`` for ``e`` in {0, 1, 2}, and ``-1`` where
``chi(a) = 0``.
"""

import math

import numpy as np

from ._jit import USE_NUMBA, njit

_TWO_PI = 2.0 * math.pi
_COS3 = np.array([1.0, -0.5, -0.5])
_SIN3 = np.array([0.0, math.sqrt(3.0) / 2.0, -math.sqrt(3.0) / 2.0])


# ---------------------------------------------------------------------------
# sieve marking


@njit
def mark_segment_nb(mask, seg_lo, starts, steps):
    n = mask.shape[0]
    seg_hi = seg_lo + n
    for i in range(starts.shape[0]):
        step = steps[i]
        r = starts[i]
        if r < seg_lo:
            r += ((seg_lo - r + step - 1) // step) * step
        while r < seg_hi:
            mask[r - seg_lo] = False
            r += step


def mark_segment_np(mask, seg_lo, starts, steps):
    n = mask.shape[0]
    starts = np.asarray(starts, dtype=np.int64)
    steps = np.asarray(steps, dtype=np.int64)
    lag = seg_lo - starts
    first = np.where(lag > 0, starts + ((lag + steps - 1) // steps) * steps, starts) - seg_lo
    live = first < n
    for f, s in zip(first[live].tolist(), steps[live].tolist()):
        mask[f::s] = False


# ---------------------------------------------------------------------------
# brute-force root counts of f_t mod p over all t


@njit
def split_counts_nb(p):
    counts = np.zeros(p, dtype=np.int64)
    for t in range(p):
        c = 0
        for x in range(p):
            v = (x * x % p * x - t * (x * x % p) - (t + 3) * x - 1) % p
            if v == 0:
                c += 1
        counts[t] = c
    return counts


def split_counts_np(p):
    x = np.arange(p, dtype=np.int64)
    base = (x * x % p * x - 3 * x - 1) % p
    lin = (x * x + x) % p
    t = np.arange(p, dtype=np.int64)[:, None]
    vals = (base[None, :] - t * lin[None, :]) % p
    return np.count_nonzero(vals == 0, axis=1).astype(np.int64)


# ---------------------------------------------------------------------------
# Gauss sum and log-sine sum for L(1, chi)


@njit
def character_sums_nb(exps, q):
    # Kahan-compensated accumulation of tau and of sum conj(chi(a)) log(2 sin(pi a/q))
    cos3 = np.array([1.0, -0.5, -0.5])
    sin3 = np.array([0.0, math.sqrt(3.0) / 2.0, -math.sqrt(3.0) / 2.0])
    tr = 0.0
    tr_c = 0.0
    ti = 0.0
    ti_c = 0.0
    sr = 0.0
    sr_c = 0.0
    si = 0.0
    si_c = 0.0
    for a in range(1, q):
        e = exps[a]
        if e < 0:
            continue
        cr = cos3[e]
        ci = sin3[e]
        ang = 2.0 * math.pi * a / q
        ca = math.cos(ang)
        sa = math.sin(ang)
        lg = math.log(2.0 * math.sin(math.pi * a / q))

        y = (cr * ca - ci * sa) - tr_c
        s = tr + y
        tr_c = (s - tr) - y
        tr = s

        y = (cr * sa + ci * ca) - ti_c
        s = ti + y
        ti_c = (s - ti) - y
        ti = s

        y = cr * lg - sr_c
        s = sr + y
        sr_c = (s - sr) - y
        sr = s

        y = -ci * lg - si_c
        s = si + y
        si_c = (s - si) - y
        si = s
    return complex(tr, ti), complex(sr, si)


def character_sums_np(exps, q):
    a = np.arange(1, q)
    e = np.asarray(exps[1:q])
    live = e >= 0
    a = a[live]
    e = e[live]
    ang = _TWO_PI * a / q
    cr = _COS3[e]
    ci = _SIN3[e]
    ca = np.cos(ang)
    sa = np.sin(ang)
    lg = np.log(2.0 * np.sin(math.pi * a / q))
    tau = complex(np.sum(cr * ca - ci * sa), np.sum(cr * sa + ci * ca))
    s = complex(np.sum(cr * lg), np.sum(-ci * lg))
    return tau, s


# ---------------------------------------------------------------------------
# partial sums of chi(n)/n


@njit
def partial_series_nb(exps, q, N):
    cos3 = np.array([1.0, -0.5, -0.5])
    sin3 = np.array([0.0, math.sqrt(3.0) / 2.0, -math.sqrt(3.0) / 2.0])
    re = 0.0
    im = 0.0
    for n in range(N, 0, -1):
        e = exps[n % q]
        if e >= 0:
            re += cos3[e] / n
            im += sin3[e] / n
    return complex(re, im)


def partial_series_np(exps, q, N, chunk=1 << 20):
    exps = np.asarray(exps)
    re = 0.0
    im = 0.0
    for lo in range(1, N + 1, chunk):
        n = np.arange(lo, min(N, lo + chunk - 1) + 1, dtype=np.int64)
        e = exps[n % q]
        live = e >= 0
        inv = 1.0 / n[live]
        e = e[live]
        re += float(np.sum(_COS3[e] * inv))
        im += float(np.sum(_SIN3[e] * inv))
    return complex(re, im)


# ---------------------------------------------------------------------------
# discrete log mod 3 tables


@njit
def cubic_index_table_nb(p, gen):
    table = np.full(p, -1, dtype=np.int8)
    x = 1
    for i in range(p - 1):
        table[x] = i % 3
        x = x * gen % p
    return table


def cubic_index_table_np(p, gen):
    # a^((p-1)/3) lands on zeta^ind(a); needs p^2 < 2^63
    m = (p - 1) // 3
    zeta = pow(gen, m, p)
    base = np.arange(p, dtype=np.int64)
    acc = np.ones(p, dtype=np.int64)
    e = m
    while e:
        if e & 1:
            acc = acc * base % p
        base = base * base % p
        e >>= 1
    table = np.full(p, -1, dtype=np.int8)
    table[acc == 1] = 0
    table[acc == zeta] = 1
    table[acc == zeta * zeta % p] = 2
    table[0] = -1
    return table


if USE_NUMBA:
    mark_segment = mark_segment_nb
    split_counts = split_counts_nb
    character_sums = character_sums_nb
    partial_series = partial_series_nb
    cubic_index_table = cubic_index_table_nb
else:
    mark_segment = mark_segment_np
    split_counts = split_counts_np
    character_sums = character_sums_np
    partial_series = partial_series_np
    cubic_index_table = cubic_index_table_np
