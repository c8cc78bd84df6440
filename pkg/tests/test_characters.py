import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicfields import kernels
from cubicfields.characters import (
    OMEGA,
    OMEGA_BAR,
    SplittingType,
    build_character,
    char_eval,
    char_exponent,
    count_roots_mod_p,
    field_is_valid,
    split_count_formula,
    split_residues,
    splitting_type,
)
from cubicfields.errors import InternalConsistencyError, UnderdeterminedError
from cubicfields.fields import g_eval
from cubicfields.numcore import factorize, primes_up_to

S, I, R = SplittingType.SPLIT, SplittingType.INERT, SplittingType.RAMIFIED
VALID = [t for t in range(1, 301) if field_is_valid(t)]


@pytest.mark.parametrize("t, p, want", [(1, 13, R), (1, 5, S), (1, 7, I), (2, 19, R), (1, 2, I), (1, 3, I)])
def test_splitting_examples(t, p, want):
    assert splitting_type(t, p) is want


def test_f1_roots_mod_5():
    assert [x for x in range(5) if (x**3 - x * x - 4 * x - 1) % 5 == 0] == [1, 2, 3]


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 97, 9973, 10007, 10009, 100003])
def test_root_count_matches_direct_scan(p):
    for t in range(0, p, max(1, p // 37)):
        direct = sum((x**3 - t * x * x - (t + 3) * x - 1) % p == 0 for x in range(p))
        assert count_roots_mod_p(t, p) == direct


def test_one_or_two_roots_is_inconsistent(monkeypatch):
    import cubicfields.characters as ch

    monkeypatch.setattr(ch, "count_roots_mod_p", lambda t, p: 1)
    with pytest.raises(InternalConsistencyError):
        ch.splitting_type(1, 5)


@pytest.mark.parametrize("p, want", [(5, [1]), (7, [2]), (13, [5, 11, 12])])
def test_split_residue_examples(p, want):
    assert split_residues(p) == want


def test_split_residues_match_brute_force_kernel():
    for p in primes_up_to(1000):
        if p < 5:
            continue
        brute = [t for t, c in enumerate(kernels.split_counts(p)) if c == 3 and g_eval(t) % p]
        assert split_residues(p) == brute
        assert len(brute) == split_count_formula(p)
        assert len(brute) == ((p - 4) // 3 if p % 3 == 1 else (p - 2) // 3)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_split_residues_small_p(p):
    with pytest.raises(ValueError):
        split_residues(p)


def test_character_t1():
    chi = build_character(1)
    assert chi.conductor == 13
    assert chi(5) == 1
    assert chi(7) in (OMEGA, OMEGA_BAR)
    assert chi(13) == 0 and chi(1) == 1


def test_character_t2():
    chi = build_character(2)
    assert chi.conductor == 19
    assert len(chi.components) == 1 and chi.components[0][2] in (1, 2)


def test_conjugate_is_also_consistent():
    chi = build_character(7)
    bar = chi.conjugate()
    for n in range(1, 500):
        assert abs(bar(n) - chi(n).conjugate()) < 1e-15


@pytest.mark.parametrize("t", VALID)
def test_character_structure(t):
    chi = build_character(t)
    q = chi.conductor
    assert q == g_eval(t) == math.prod(p for p, _, _ in chi.components)
    assert all(p % 3 == 1 for p, _, _ in chi.components)
    assert chi(q - 1) == 1  # even
    assert chi(2) in (OMEGA, OMEGA_BAR) and chi(3) in (OMEGA, OMEGA_BAR)
    # split primes are exactly the kernel, for primes well beyond the fitted ones
    for r in primes_up_to(500):
        if q % r:
            assert (char_exponent(chi, r) == 0) == (splitting_type(t, r) is S)
    # order 3 and primitive: nontrivial on each component
    table = chi.exponent_table()
    assert set(table.tolist()) == {-1, 0, 1, 2}
    for p, _, _ in chi.components:
        # some n = 1 mod q/p has chi(n) != 1
        m = q // p
        assert any(char_exponent(chi, n) not in (0, None) for n in range(1, q, m))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(VALID), st.integers(1, 10**9), st.integers(1, 10**9))
def test_multiplicative(t, a, b):
    chi = build_character(t)
    assert abs(char_eval(chi, a * b) - char_eval(chi, a) * char_eval(chi, b)) < 1e-12


def test_exponent_table_matches_pointwise():
    chi = build_character(4)
    table = chi.exponent_table()
    for n in range(chi.conductor):
        k = char_exponent(chi, n)
        assert table[n] == (-1 if k is None else k)


def test_character_errors():
    with pytest.raises(ValueError):
        build_character(3)
    with pytest.raises(ValueError):
        build_character(5)  # 49
    # three-prime conductor with a single test prime cannot fix the exponent vector
    t = next(t for t in range(1, 300) if field_is_valid(t) and len(factorize(g_eval(t)).primes) == 3)
    with pytest.raises(UnderdeterminedError):
        build_character(t, test_prime_bound=2)
