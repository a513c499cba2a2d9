import math
from fractions import Fraction

import pytest

from gaussseq.export import canonical_json
from gaussseq.harness import SweepConfig, Target, run_sweep, theta_grid, verify_gauss_bound
from gaussseq.sequences import ConstructionError


def canon(report):
    return canonical_json(report.to_dict())


def test_theta_grid_is_exact_and_half_open():
    g = theta_grid(16)
    assert len(g) == 16 and g[-1] == Fraction(1, 2) and g[0] == Fraction(-7, 16)
    assert all(-Fraction(1, 2) < t <= Fraction(1, 2) for t in g)


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig("NoSuchTarget")
    with pytest.raises(ValueError):
        SweepConfig("FibZeta", rng="mt19937")
    with pytest.raises(ValueError):
        SweepConfig("FibZeta", seed=-1)
    with pytest.raises(ValueError):
        SweepConfig("FibZeta", workers=0)
    with pytest.raises(ValueError):
        SweepConfig.from_dict({"target": "FibZeta", "colour": "red"})
    cfg = SweepConfig.from_dict({"target": "Lemma2", "params": {"samples": 3}, "seed": 2**64 - 1})
    assert cfg.target is Target.LEMMA2


def test_generators_are_named_and_seeded():
    draws = {}
    for name in ("pcg64", "philox", "sfc64"):
        a = SweepConfig("FibZeta", seed=7, rng=name).generator().random(4).tolist()
        b = SweepConfig("FibZeta", seed=7, rng=name).generator().random(4).tolist()
        assert a == b
        draws[name] = a
    assert len({tuple(v) for v in draws.values()}) == 3


def test_single_modulus_complete_sums():
    r = verify_gauss_bound(5, thetas=[0])
    # the largest partial sum is at N = 4, not the complete sum
    assert r.observed_max == pytest.approx(1 + math.sqrt(5), abs=1e-12)
    assert r.witness["N"] == 4
    assert r.bound_value == pytest.approx(47.88, abs=1e-2)
    assert r.passed


def test_smallest_modulus():
    r = verify_gauss_bound(2)
    assert r.observed_max <= 2 and r.passed


def test_random_mode_reports_normalised_maximum():
    r = verify_gauss_bound(997, random_samples=500, exhaustive=False, seed=4)
    assert r.passed
    assert r.extra["max_abs_S_over_sqrt_q"] < 20.07
    with pytest.raises(ValueError):
        verify_gauss_bound(997, exhaustive=False)
    with pytest.raises(ValueError):
        verify_gauss_bound(1)


def test_gauss_bound_target_matches_helper():
    r = run_sweep(SweepConfig("Theorem1", {"q_values": [5], "thetas": [0]}))
    assert r.observed_max == pytest.approx(1 + math.sqrt(5))
    assert r.bound_value == pytest.approx(20.07 * math.sqrt(5) + 3)


def test_gauss_bound_sweep_small_range():
    r = run_sweep(SweepConfig("Theorem1", {"q_range": [2, 30], "theta_grid": 4, "random_samples": 50}))
    assert r.bound_value == 1.0 and r.passed
    assert r.extra["exhaustive_pairs"] == sum(
        1 for q in range(2, 31) for a in range(1, q) if math.gcd(a, q) == 1
    )


def test_empty_sweeps_rejected():
    with pytest.raises(ValueError):
        run_sweep(SweepConfig("Theorem1", {"q_values": []}))
    with pytest.raises(ValueError):
        run_sweep(SweepConfig("Lemma2", {"samples": 0}))
    with pytest.raises(ValueError):
        run_sweep(SweepConfig("WelchSanity", {"sets": []}))


def test_size_cap_enforced_and_liftable():
    with pytest.raises(ValueError, match="size cap"):
        run_sweep(SweepConfig("C1Bound", {"K": 2, "L": 20001}))
    with pytest.raises(ValueError, match="size cap"):
        run_sweep(SweepConfig("Theorem1", {"q_values": [30000]}))
    small = SweepConfig("C1Bound", {"K": 2, "L": 15}, size_cap=10)
    with pytest.raises(ValueError):
        run_sweep(small)
    assert run_sweep(SweepConfig("C1Bound", {"K": 2, "L": 15}, size_cap=None)).passed


def test_construction_errors_propagate_with_precondition():
    with pytest.raises(ConstructionError) as info:
        run_sweep(SweepConfig("C1Bound", {"K": 4, "L": 15}))
    assert info.value.precondition == "least_prime_factor"
    with pytest.raises(ConstructionError) as info:
        run_sweep(SweepConfig("A2Bound", {"p": 101, "K": 101}))
    assert info.value.precondition == "K_range"


def test_modulus_search_through_config():
    r = run_sweep(SweepConfig("C1Bound", {"K": 6, "L_min": 1247}))
    assert r.params["L"] == 1249
    r = run_sweep(SweepConfig("C2Bound", {"K": 2, "m": 1, "L_min": 100}))
    assert r.params["L"] == 101


def test_reduction_targets_share_samples():
    a = run_sweep(SweepConfig("Lemma2", {"samples": 60, "q_max": 500}, seed=3))
    b = run_sweep(SweepConfig("ParisResidual", {"samples": 60, "q_max": 500}, seed=3))
    assert a.extra["max_residual_over_x"] == b.observed_max
    assert b.extra["max_T_ratio"] == a.observed_max
    assert b.passed


def test_set_targets_report_witnesses_that_reproduce():
    for target, params in [
        ("C1Bound", {"K": 4, "L": 35}),
        ("C2Bound", {"K": 3, "m": 2, "L": 1201}),
        ("A1Bound", {"p": 31}),
        ("A2Bound", {"p": 101, "K": 4}),
    ]:
        r = run_sweep(SweepConfig(target, params))
        assert r.passed, target
        assert r.extra["witness_direct"] == pytest.approx(r.observed_max, rel=1e-9)
        assert set(r.witness) == {"root1", "root2", "tau", "nu"}


def test_mow_ratio_only_reported_for_pairs():
    assert "mow_odd_constant" in run_sweep(SweepConfig("C1Bound", {"K": 2, "L": 15})).extra
    assert "mow_odd_constant" not in run_sweep(SweepConfig("C1Bound", {"K": 4, "L": 35})).extra


def test_alltop_spot_checks_cover_one_percent():
    r = run_sweep(SweepConfig("A1Bound", {"p": 101}, seed=5))
    spot = r.extra["spot_check"]
    assert spot["pairs_checked"] == round(0.01 * 101 * 102 / 2)
    assert spot["ok"]


def test_welch_sanity_default_sets():
    r = run_sweep(SweepConfig("WelchSanity"))
    assert r.passed
    assert all(row["delta_max"] >= row["welch_bound"] - 1e-6 for row in r.extra["sets"])


def test_fibonacci_target():
    r = run_sweep(SweepConfig("FibZeta", {"n": 20}))
    assert r.passed
    assert r.extra["partial_sum"] == pytest.approx(5.338116843548761, abs=1e-12)


def test_littlewood_target_flags_short_lengths():
    # below N = 23 some odd lengths exceed the constant (N = 3 reaches 1.527)
    small = run_sweep(SweepConfig("Littlewood", {"N_max": 21}))
    assert not small.passed and small.witness["N"] == 3


@pytest.mark.parametrize("target, params", [
    ("Theorem1", {"q_range": [2, 25], "theta_grid": 4, "random_samples": 40, "random_q_max": 300}),
    ("Lemma2", {"samples": 40, "q_max": 400}),
    ("Littlewood", {"N_max": 61, "theta_grid": 8}),
    ("A1Bound", {"p": 31}),
    ("C2Bound", {"K": 2, "m": 1, "L": 101}),
])
def test_reports_identical_across_worker_counts(target, params):
    texts = {canon(run_sweep(SweepConfig(target, params, seed=11, workers=w))) for w in (1, 2, 8)}
    assert len(texts) == 1


def test_wall_time_recorded_but_not_canonical():
    r = run_sweep(SweepConfig("FibZeta"))
    assert r.wall_time >= 0
    assert "wall_time" not in canon(r)
