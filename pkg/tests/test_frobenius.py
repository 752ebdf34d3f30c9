"""Split-sample statistic and the Frobenius threshold tests."""

import math

import numpy as np
import pytest

import iertest as it
from iertest import (
    DimensionError,
    GraphPopulation,
    RngStream,
    SampleSizeError,
    t1_statistic,
    thm1_feasible_region,
    thm1_test,
    thm1_threshold,
    thm3_test,
)
from iertest.model import relabel


def pop_of(*matrices):
    return GraphPopulation(tuple(it.validate_adjacency(m) for m in matrices))


EDGE = [[0, 1], [1, 0]]
EMPTY = [[0, 0], [0, 0]]


def sampled_pops(n, m, p, q, seed):
    base = RngStream(seed)
    popG = it.sample_population(it.constant_model(n, p), m, base.child(0))
    popH = it.sample_population(it.constant_model(n, q), m, base.child(1))
    return popG, popH


# ---------------------------------------------------------------------------
# statistic


def test_identical_populations_give_zero():
    popG, _ = sampled_pops(8, 4, 0.5, 0.5, 1)
    comps = t1_statistic(popG, popG)
    assert comps.mu_hat == 0
    assert comps.t1 == 0.0


def test_hand_enumerated_single_pair():
    popG = pop_of(EDGE, EDGE)
    popH = pop_of(EMPTY, EMPTY)
    comps = t1_statistic(popG, popH)
    assert comps.mu_hat == 1
    assert comps.sigma_sq == 1
    assert comps.t1 == 1.0
    assert comps.m_used == 2


def test_all_empty_populations_use_zero_convention():
    popG = pop_of(EMPTY, EMPTY)
    comps = t1_statistic(popG, popG)
    assert comps.mu_hat == 0 and comps.sigma_sq == 0 and comps.t1 == 0.0


def test_m1_is_hard_error():
    popG = pop_of(EDGE)
    with pytest.raises(SampleSizeError):
        t1_statistic(popG, popG)
    with pytest.raises(SampleSizeError):
        thm1_test(popG, popG, 0.1)
    with pytest.raises(SampleSizeError):
        thm3_test(popG, popG, 0.1)


def test_dimension_mismatch_errors():
    popG, _ = sampled_pops(5, 2, 0.5, 0.5, 2)
    popH, _ = sampled_pops(6, 2, 0.5, 0.5, 2)
    with pytest.raises(DimensionError):
        t1_statistic(popG, popH)
    popH2, _ = sampled_pops(5, 4, 0.5, 0.5, 2)
    with pytest.raises(DimensionError):
        t1_statistic(popG, popH2)


def test_odd_m_drops_last_sample_of_both():
    popG, popH = sampled_pops(7, 5, 0.6, 0.2, 3)
    comps = t1_statistic(popG, popH)
    assert comps.m_used == 4
    truncated = t1_statistic(
        GraphPopulation(popG.graphs[:4]), GraphPopulation(popH.graphs[:4])
    )
    assert comps == truncated


def test_swap_symmetry_exact():
    for seed in range(25):
        popG, popH = sampled_pops(9, 4, 0.7, 0.2, 100 + seed)
        a = t1_statistic(popG, popH)
        b = t1_statistic(popH, popG)
        assert a.mu_hat == b.mu_hat
        assert a.sigma_sq == b.sigma_sq
        assert a.t1 == b.t1


def test_vertex_relabeling_invariance_exact():
    gen = np.random.default_rng(17)
    for seed in range(10):
        popG, popH = sampled_pops(8, 4, 0.5, 0.3, 200 + seed)
        perm = gen.permutation(8)
        popG_r = GraphPopulation(
            tuple(it.validate_adjacency(relabel(g.entries, perm)) for g in popG.graphs)
        )
        popH_r = GraphPopulation(
            tuple(it.validate_adjacency(relabel(g.entries, perm)) for g in popH.graphs)
        )
        assert t1_statistic(popG, popH) == t1_statistic(popG_r, popH_r)


def test_integer_invariants_on_random_populations():
    for seed in range(20):
        popG, popH = sampled_pops(6, 6, 0.8, 0.1, 300 + seed)
        comps = t1_statistic(popG, popH)
        assert isinstance(comps.mu_hat, int)
        assert isinstance(comps.sigma_sq, int)
        assert comps.sigma_sq >= 0
        assert comps.sigma_hat == math.sqrt(comps.sigma_sq)


def test_unbiasedness_small_monte_carlo():
    # Mean of mu_hat approaches (m^2/8)||P-Q||_F^2; reduced-scale version
    # of the full acceptance run.
    n, m, trials = 10, 4, 3000
    P = it.constant_model(n, 0.4)
    Q = it.constant_model(n, 0.2)
    mus = np.empty(trials)
    sigs = np.empty(trials)
    for t in range(trials):
        base = RngStream(555)
        popG = it.sample_population(P, m, base.child(2 * t))
        popH = it.sample_population(Q, m, base.child(2 * t + 1))
        comps = t1_statistic(popG, popH)
        mus[t] = comps.mu_hat
        sigs[t] = comps.sigma_sq
    expect_mu = (m * m / 8) * it.frobenius_norm(P.entries - Q.entries) ** 2
    expect_sig = (m * m / 8) * it.frobenius_norm(P.entries + Q.entries) ** 2
    assert abs(mus.mean() - expect_mu) <= 4 * mus.std(ddof=1) / math.sqrt(trials)
    assert abs(sigs.mean() - expect_sig) <= 4 * sigs.std(ddof=1) / math.sqrt(trials)


# ---------------------------------------------------------------------------
# threshold tests


def test_thm1_threshold_value():
    # Independent re-evaluation of 8 sqrt(6 ln(4/eta)) at eta = 0.05.
    assert thm1_threshold(0.05) == pytest.approx(41.021, abs=1e-3)


def test_thm1_accepts_identical_populations():
    popG, _ = sampled_pops(10, 4, 0.5, 0.5, 4)
    out = thm1_test(popG, popG, 0.05)
    assert out.statistic == 0.0
    assert not out.reject
    assert out.reject == all(out.indicators.values())


def test_thm1_guarantee_record():
    popG, popH = sampled_pops(10, 4, 0.5, 0.5, 5)
    out = thm1_test(popG, popH, 0.05)
    assert out.guarantee.cc_min == pytest.approx(16 * math.sqrt(6 * math.log(80)))
    assert out.guarantee.rho_min == pytest.approx(
        (8 * math.sqrt(6) / 2) * math.log(80) ** 0.25
    )


def test_thm1_rejects_extreme_separation():
    # Complete graphs against empty graphs: t1 is huge.
    n, m = 40, 6
    popG = GraphPopulation(
        tuple(it.validate_adjacency(np.ones((n, n)) - np.eye(n)) for _ in range(m))
    )
    popH = GraphPopulation(
        tuple(it.validate_adjacency(np.zeros((n, n))) for _ in range(m))
    )
    out = thm1_test(popG, popH, 0.05)
    assert out.reject


def test_thm3_thresholds():
    popG, popH = sampled_pops(100, 4, 0.5, 0.5, 6)
    out = thm3_test(popG, popH, 0.05)
    assert out.thresholds["t1"] == pytest.approx(16 * math.log(20 * 100**2 / 0.05))
    assert out.thresholds["t1"] == pytest.approx(243.23, abs=0.01)
    assert out.thresholds["sigma_hat"] == pytest.approx(
        400 * math.log(800) ** 2 * math.log(20 * 100**2 / 0.05)
    )


def test_thm3_accepts_identical_and_empty():
    popG, _ = sampled_pops(12, 4, 0.4, 0.4, 7)
    assert not thm3_test(popG, popG, 0.05).reject
    empty = GraphPopulation(
        tuple(it.validate_adjacency(np.zeros((12, 12))) for _ in range(4))
    )
    out = thm3_test(empty, empty, 0.05)
    assert not out.indicators["sigma_above_threshold"]
    assert not out.reject


def test_thm3_guarantee_uses_sparse_rate():
    popG, popH = sampled_pops(12, 8, 0.4, 0.4, 8)
    out = thm3_test(popG, popH, 0.05)
    expected = 50 * math.log(800) * math.sqrt((2 / 8) * math.log(20 * 144 / 0.05))
    assert out.guarantee.rho_min == pytest.approx(expected)
    assert out.guarantee.cc_min == 0.0


def test_feasible_region():
    reg = thm1_feasible_region(100, 1, 0.05)
    assert not reg.feasible
    reg2 = thm1_feasible_region(1000, 2, 0.05)
    assert reg2.rho_min == pytest.approx(20.05, abs=0.01)
    assert reg2.feasible
    # rho_min decays like 1/sqrt(m)
    assert thm1_feasible_region(1000, 200, 0.05).rho_min < 0.1 * reg2.rho_min
    # the sparsity floor must fit under the trivial cap n/sqrt(8)
    assert not thm1_feasible_region(20, 2, 0.05).feasible


def test_eta_validation():
    popG, _ = sampled_pops(6, 2, 0.5, 0.5, 9)
    for bad in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValueError):
            thm1_test(popG, popG, bad)


def test_type_one_error_rate_reduced():
    # Reduced-scale version of the acceptance protocol.
    pair = it.constant_pair(30, 0.3, 0.3)
    spec = it.TrialSpec("thm1", pair, 6, 0.1, 300, 808)
    est = it.empirical_rejection_rate(spec)
    assert est.rejection_rate <= 0.1 + 3 * est.std_error
