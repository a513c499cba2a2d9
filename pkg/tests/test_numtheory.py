import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gaussseq.numtheory import (
    EuclidChain,
    ReducedFraction,
    euclid_chain,
    fibonacci,
    fibonacci_index_above,
    fibonacci_zeta_partial,
    is_prime,
    lcm_range,
    least_prime_factor,
    wrap_half_open,
)


@pytest.mark.parametrize("k, expected", [(1, 1), (2, 2), (3, 6), (4, 12), (5, 60), (10, 2520)])
def test_lcm_range_values(k, expected):
    assert lcm_range(k) == expected


def test_lcm_range_rejects_zero():
    with pytest.raises(ValueError):
        lcm_range(0)


@pytest.mark.parametrize("n, expected", [(2, 2), (9, 3), (35, 5), (1009, 1009), (1249, 1249), (1001, 7)])
def test_least_prime_factor_values(n, expected):
    assert least_prime_factor(n) == expected


@pytest.mark.parametrize("n", [1, 0, -7])
def test_least_prime_factor_rejects_small(n):
    with pytest.raises(ValueError):
        least_prime_factor(n)


@given(st.integers(min_value=2, max_value=10**6))
def test_least_prime_factor_divides_and_is_minimal(n):
    p = least_prime_factor(n)
    assert n % p == 0
    assert all(n % d for d in range(2, p))
    assert is_prime(p)


def test_is_prime_small_table():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize(
    "a, q, chain",
    [(1, 2, (2, 1)), (5, 8, (8, 5, 3, 2, 1)), (13, 21, (21, 13, 8, 5, 3, 2, 1)), (1, 7, (7, 1))],
)
def test_euclid_chain_examples(a, q, chain):
    assert euclid_chain(ReducedFraction(a, q)).terms == chain


@given(st.integers(min_value=2, max_value=20000).flatmap(
    lambda q: st.tuples(st.just(q), st.integers(min_value=1, max_value=q - 1))))
def test_euclid_chain_properties(qa):
    q, a = qa
    if math.gcd(a, q) != 1:
        return
    chain = euclid_chain(ReducedFraction(a, q)).terms
    assert chain[0] == q and chain[1] == a and chain[-1] == 1
    assert len(chain) <= fibonacci_index_above(q)
    for j in range(len(chain) - 1):
        assert math.gcd(chain[j], chain[j + 1]) == 1
    for j in range(len(chain) - 2):
        assert chain[j + 2] == chain[j] % chain[j + 1]


def test_fibonacci_pair_has_longest_chain_below_bound():
    assert len(euclid_chain(ReducedFraction(13, 21))) == 7
    assert fibonacci_index_above(21) == 9


@pytest.mark.parametrize("terms", [(5, 3, 2), (5, 5, 1), (8, 5, 2, 1), ()])
def test_euclid_chain_type_rejects_invalid(terms):
    with pytest.raises(ValueError):
        EuclidChain(terms)


@pytest.mark.parametrize("a, q", [(0, 5), (5, 5), (2, 4), (1, 1), (6, 5)])
def test_reduced_fraction_rejects_invalid(a, q):
    with pytest.raises(ValueError):
        ReducedFraction(a, q)


def test_reduced_fraction_value():
    x = ReducedFraction(3, 7)
    assert x.as_fraction() == Fraction(3, 7)
    assert float(x) == 3 / 7


@pytest.mark.parametrize(
    "t, expected",
    [(0.5, 0.5), (0.75, -0.25), (-0.5, 0.5), (1.5, 0.5), (-1.25, -0.25), (3.0, 0.0), (0.25, 0.25)],
)
def test_wrap_half_open_examples(t, expected):
    assert wrap_half_open(t) == pytest.approx(expected, abs=1e-15)


def test_wrap_half_open_exact_for_fractions():
    assert wrap_half_open(Fraction(-1, 2)) == Fraction(1, 2)
    assert wrap_half_open(Fraction(7, 3)) == Fraction(1, 3)
    assert wrap_half_open(Fraction(-5, 6)) == Fraction(1, 6)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_wrap_half_open_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        wrap_half_open(bad)


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), st.integers(min_value=-1000, max_value=1000))
def test_wrap_half_open_is_one_periodic(t, k):
    w = wrap_half_open(t)
    assert -0.5 < w <= 0.5
    other = wrap_half_open(t + k)
    # equal modulo 1; the representatives can only differ at the +-1/2 seam
    d = abs(w - other)
    assert d <= 1e-9 or abs(d - 1) <= 1e-9


def test_fibonacci_numbers():
    assert [fibonacci(n) for n in range(1, 11)] == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    assert fibonacci(80) == 23416728348467685


def test_fibonacci_zeta_small_partials():
    assert fibonacci_zeta_partial(1) == 1.0
    assert fibonacci_zeta_partial(2) == 2.0
    assert fibonacci_zeta_partial(3) == pytest.approx(2 + 1 / math.sqrt(2), abs=1e-15)


def test_fibonacci_zeta_monotone_and_bounded():
    values = [fibonacci_zeta_partial(n) for n in range(1, 120)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert max(values) < 5.383


def test_fibonacci_zeta_twenty_terms_value():
    # direct 20-term sum with F_1 = F_2 = 1
    assert fibonacci_zeta_partial(20) == pytest.approx(5.338116843548761, abs=1e-12)


def test_fibonacci_zeta_limit_just_below_5383():
    assert 5.3828 < fibonacci_zeta_partial(100) < 5.383
