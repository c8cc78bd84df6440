import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicfields.numcore import (
    Factorization,
    crt_combine,
    factorize,
    is_probable_prime,
    is_squarefree,
    primes_up_to,
    primitive_root,
    sqrt_mod,
)

from conftest import trial_is_prime


def test_primes_up_to_100():
    ps = primes_up_to(100)
    assert len(ps) == 25 and ps[-1] == 97
    assert ps == [n for n in range(101) if trial_is_prime(n)]


@pytest.mark.parametrize("limit", [0, 1, 2, 3, 4])
def test_primes_tiny(limit):
    assert primes_up_to(limit) == [p for p in (2, 3) if p <= limit]


def test_crt_example():
    assert crt_combine([2, 3, 2], [3, 5, 7]) == (23, 105)


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=6))
def test_crt_property(vals):
    mods = [2, 3, 5, 7, 11, 13][: len(vals)]
    res = [v % m for v, m in zip(vals, mods)]
    r, q = crt_combine(res, mods)
    assert q == math.prod(mods) and 0 <= r < q
    assert all(r % m == c for c, m in zip(res, mods))


@pytest.mark.parametrize(
    "res, mods",
    [([1, 2], [4, 6]), ([1], [3, 5]), ([], []), ([0], [0]), ([1], [-3])],
)
def test_crt_errors(res, mods):
    with pytest.raises(ValueError):
        crt_combine(res, mods)


def test_primality_against_trial_division():
    assert [n for n in range(5000) if is_probable_prime(n)] == primes_up_to(4999)


@pytest.mark.parametrize("n", [2**61 - 1, 10**18 + 9, 2**89 - 1])
def test_known_large_primes(n):
    assert is_probable_prime(n)


@pytest.mark.parametrize("n", [561, 3215031751, 10**18 + 7, (2**31 - 1) * (2**61 - 1)])
def test_known_composites(n):
    assert not is_probable_prime(n)


def test_factorize_examples():
    assert factorize(1).factors == ()
    assert factorize(10309).factors == ((13, 2), (61, 1))
    assert not factorize(10309).is_squarefree()
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_roundtrip_random():
    rng = random.Random(7)
    for _ in range(10_000):
        n = rng.randint(1, 10**12)
        fac = factorize(n)
        assert isinstance(fac, Factorization)
        assert fac.value() == n
        assert all(is_probable_prime(p) for p in fac.primes)
        assert fac.primes == sorted(set(fac.primes))


def test_factorize_semiprime_beyond_trial_bound():
    p, q = 1000003, 998244353
    assert factorize(p * q).factors == ((p, 1), (q, 1))
    assert factorize(p * p * q).factors == ((p, 2), (q, 1))


def test_squarefree_matches_square_sieve():
    limit = 10**6
    sf = np.ones(limit + 1, dtype=bool)
    sf[0] = False
    for p in primes_up_to(math.isqrt(limit)):
        sf[:: p * p] = False
    got = np.array([False] + [is_squarefree(n) for n in range(1, limit + 1)])
    assert np.array_equal(got, sf)
    assert int(sf.sum()) == 607926


@settings(max_examples=200)
@given(st.sampled_from(primes_up_to(2000)[1:]), st.integers(0, 10**6))
def test_sqrt_mod(p, a):
    a %= p
    r = sqrt_mod(a, p)
    is_qr = a == 0 or pow(a, (p - 1) // 2, p) == 1
    if is_qr:
        assert r is not None and r * r % p == a
    else:
        assert r is None


@pytest.mark.parametrize("p", [7, 13, 19, 31, 37, 43, 61, 1000003])
def test_primitive_root(p):
    g = primitive_root(p)
    fac = factorize(p - 1)
    assert all(pow(g, (p - 1) // r, p) != 1 for r in fac.primes)
    # smallest such
    for c in range(2, g):
        assert any(pow(c, (p - 1) // r, p) == 1 for r in fac.primes)
