import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaussseq.numtheory import lcm_range, least_prime_factor
from gaussseq.sequences import (
    ConstructionError,
    Family,
    LazRegion,
    SearchError,
    SetKind,
    alltop,
    build_A1,
    build_A2,
    build_C1,
    build_C2,
    build_set,
    chu,
    find_alltop_prime,
    find_C1_modulus,
    find_C2_modulus,
)


def e(v):
    return cmath.exp(2j * math.pi * v)


def test_chu_odd_small():
    s = chu(3, 1)
    assert s.family is Family.CHU_ODD
    np.testing.assert_allclose(s.samples, [1, 1, e(1 / 3)], atol=1e-15)


def test_chu_even_small():
    s = chu(4, 1)
    assert s.family is Family.CHU_EVEN
    np.testing.assert_allclose(s.samples, [1, e(1 / 8), -1, e(1 / 8)], atol=1e-15)


@given(st.integers(min_value=2, max_value=400).flatmap(
    lambda L: st.tuples(st.just(L), st.integers(min_value=1, max_value=L - 1))))
def test_chu_matches_formula_and_unit_modulus(Lr):
    L, r = Lr
    s = chu(L, r)
    t = np.arange(L)
    phase = r * t * (t - 1) / (2 * L) if L % 2 else r * t * t / (2 * L)
    np.testing.assert_allclose(s.samples, np.exp(2j * np.pi * phase), atol=1e-9)
    assert np.max(np.abs(np.abs(s.samples) - 1)) <= 1e-12


@pytest.mark.parametrize("L", [3, 15, 101, 1001])
def test_chu_conjugate_root_identity_odd_length(L):
    for r in (1, 2, (L - 1) // 2):
        np.testing.assert_allclose(chu(L, L - r).samples, np.conj(chu(L, r).samples), atol=1e-12)


@pytest.mark.parametrize("L, r", [(5, 0), (5, 5), (5, -1), (1, 1)])
def test_chu_rejects_bad_arguments(L, r):
    with pytest.raises(ValueError):
        chu(L, r)


def test_alltop_small():
    s = alltop(5, 0)
    np.testing.assert_allclose(s.samples, [1, e(1 / 5), e(3 / 5), e(2 / 5), e(4 / 5)], atol=1e-15)


@pytest.mark.parametrize("p", [5, 7, 101])
def test_alltop_starts_at_one_and_unit_modulus(p):
    for r in (0, 1, p - 1, p):
        s = alltop(p, r)
        assert s.samples[0] == 1
        assert np.max(np.abs(np.abs(s.samples) - 1)) <= 1e-12


def test_alltop_root_reduced_for_evaluation_but_label_kept():
    s = alltop(7, 7)
    assert s.root == 7
    np.testing.assert_array_equal(s.samples, alltop(7, 0).samples)


@pytest.mark.parametrize("p, which", [(4, "p_at_least_5"), (3, "p_at_least_5"), (9, "p_prime"), (91, "p_prime")])
def test_alltop_rejects_bad_modulus(p, which):
    with pytest.raises(ConstructionError) as info:
        alltop(p, 1)
    assert info.value.precondition == which


def test_generation_is_deterministic():
    assert chu(1001, 17) == chu(1001, 17)
    assert alltop(211, 5) == alltop(211, 5)
    assert chu(15, 1) != chu(15, 2)


def test_C1_mow_pair():
    s = build_C1(2, 15)
    assert s.kind is SetKind.C1
    assert sorted(s.roots) == [1, 14]
    assert len(s) == 2 and s.laz is None


def test_C1_four_members():
    assert set(build_C1(4, 35).roots) == {34, 17, 1, 18}


@pytest.mark.parametrize("K, L, which", [
    (4, 15, "least_prime_factor"),
    (3, 35, "K_even"),
    (2, 16, "L_odd"),
    (6, 1247, "L_congruence"),
    (0, 15, "K_even"),
])
def test_C1_named_preconditions(K, L, which):
    with pytest.raises(ConstructionError) as info:
        build_C1(K, L)
    assert info.value.precondition == which


@pytest.mark.parametrize("K, L", [(2, 15), (2, 1001), (4, 35), (4, 1225), (6, 1249), (8, 12601)])
def test_C1_root_differences_coprime_to_length(K, L):
    s = build_C1(K, L)
    assert len(s) == K
    assert len({r % L for r in s.roots}) == K
    for i, r1 in enumerate(s.roots):
        for r2 in s.roots[i + 1:]:
            assert math.gcd((r1 - r2) % L, L) == 1


def test_C1_small_modulus_flag():
    assert build_C1(4, 35).small_modulus
    assert not build_C1(2, 1001).small_modulus


def test_C2_smallest_example():
    s = build_C2(2, 1, 13)
    assert s.roots == [3, 4]
    assert s.laz == LazRegion(1, 1)


def test_C2_larger_example():
    s = build_C2(3, 2, 1201)
    assert s.roots == [5, 7, 9]
    assert s.laz == LazRegion(57, 2)


@pytest.mark.parametrize("K, m, L", [(2, 1, 13), (3, 2, 1201), (2, 3, 1021), (4, 1, 2041)])
def test_C2_zone_is_largest_strictly_below_limits(K, m, L):
    laz = build_C2(K, m, L).laz
    limit = L / ((2 * m + 3) * K)
    assert laz.z_x < limit <= laz.z_x + 1
    assert laz.z_y == K - 1


@pytest.mark.parametrize("K, m, L, which", [
    (2, 1, 12, "L_odd"),
    (2, 1, 15, "L_congruence"),
    (1, 1, 13, "K_at_least_2"),
    (2, 0, 13, "m_positive"),
    (2, 1, 1, "root_range"),
    (2, 2, 9, "laz_nonempty"),
])
def test_C2_named_preconditions(K, m, L, which):
    with pytest.raises(ConstructionError) as info:
        build_C2(K, m, L)
    assert info.value.precondition == which


def test_A1_full_set():
    s = build_A1(5)
    assert len(s) == 5 and s.roots == [1, 2, 3, 4, 5]
    with pytest.raises(ConstructionError):
        build_A1(4)


def test_A1_members_pairwise_distinct():
    m = build_A1(101).matrix()
    assert len({row.tobytes() for row in np.round(m, 12)}) == 101


def test_A2_examples():
    s = build_A2(499, 5)
    assert s.roots == [99, 198, 297, 396, 495]
    assert s.laz == LazRegion(498, 98)
    assert build_A2(5, 2).roots == [2, 4]


@pytest.mark.parametrize("p, K", [(5, 5), (5, 1), (7, 8)])
def test_A2_rejects_K_out_of_range(p, K):
    with pytest.raises(ConstructionError) as info:
        build_A2(p, K)
    assert info.value.precondition == "K_range"


def test_A2_rejects_empty_doppler_zone():
    with pytest.raises(ConstructionError) as info:
        build_A2(7, 4)
    assert info.value.precondition == "laz_nonempty"


@given(st.sampled_from([11, 13, 101, 211, 499]), st.integers(min_value=2, max_value=40))
def test_A2_roots_distinct_nonzero(p, K):
    if not K < p or p // K < 2:
        return
    roots = build_A2(p, K).roots
    assert len({r % p for r in roots}) == K
    assert all(r % p for r in roots)


def test_build_set_dispatch_and_missing_parameter():
    assert build_set("C2", K=2, m=1, L=13).roots == [3, 4]
    assert len(build_set(SetKind.A1, p=7)) == 7
    with pytest.raises(ConstructionError) as info:
        build_set("C1", K=2)
    assert info.value.precondition == "missing_parameter"
    with pytest.raises(ValueError):
        build_set("C9", K=2)


def _scan_C1(K, L_min):
    d = lcm_range(K // 2)
    L = L_min
    while not (L % 2 == 1 and L % d == 1 % d and least_prime_factor(L) > K):
        L += 1
    return L


@pytest.mark.parametrize("K, L_min, expected", [(2, 3, 3), (4, 30, 31), (6, 1247, 1249)])
def test_find_C1_modulus_examples(K, L_min, expected):
    assert find_C1_modulus(K, L_min) == expected


@given(st.sampled_from([2, 4, 6, 8, 10]), st.integers(min_value=3, max_value=5000))
def test_find_C1_modulus_equals_scan(K, L_min):
    L = find_C1_modulus(K, L_min)
    assert L == _scan_C1(K, L_min)
    build_C1(K, L)


def test_find_C2_modulus_examples():
    assert find_C2_modulus(2, 1, 10) == 13
    assert find_C2_modulus(3, 2, 1000) == 1009
    assert find_C2_modulus(2, 1, 101) == 101
    build_C2(3, 2, find_C2_modulus(3, 2, 1000))


def test_find_alltop_prime_examples():
    assert find_alltop_prime(100) == 101
    assert find_alltop_prime(0) == 5
    assert find_alltop_prime(499) == 499


def test_searches_report_not_found():
    with pytest.raises(SearchError):
        find_alltop_prime(24, span=4)
    with pytest.raises(SearchError):
        find_C1_modulus(4, 15, span=0)
    with pytest.raises(ConstructionError):
        find_C1_modulus(3, 15)


def test_laz_region_validation():
    with pytest.raises(ValueError):
        LazRegion(0, 1)
    laz = LazRegion(3, 2)
    assert list(laz.delays()) == [-2, -1, 0, 1, 2]
    assert list(laz.dopplers()) == [-1, 0, 1]
    laz.check_length(4)
    with pytest.raises(ValueError):
        laz.check_length(3)
