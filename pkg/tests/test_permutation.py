"""Permutation calibration: p-value semantics, determinism, validity."""

import math

import numpy as np
import pytest

import iertest as it
from iertest import (
    GraphPopulation,
    RngStream,
    SampleSizeError,
    permutation_pvalue,
    permutation_test,
)
from iertest.frobenius import t1_statistic
from iertest.operator import t2_statistic

EDGE = [[0, 1], [1, 0]]


def pop_of(*matrices):
    return GraphPopulation(tuple(it.validate_adjacency(m) for m in matrices))


def sampled_pops(n, m, p, q, seed):
    base = RngStream(seed)
    popG = it.sample_population(it.constant_model(n, p), m, base.child(0))
    popH = it.sample_population(it.constant_model(n, q), m, base.child(1))
    return popG, popH


def test_all_identical_graphs_give_p_one():
    popG = pop_of(EDGE, EDGE)
    popH = pop_of(EDGE, EDGE)
    for stat in ("t1", "t2"):
        res = permutation_pvalue(popG, popH, stat, 37, RngStream(1))
        assert res.p_value == 1.0


def test_single_replicate_p_values():
    popG, popH = sampled_pops(10, 3, 0.8, 0.1, 2)
    values = set()
    for seed in range(40):
        res = permutation_pvalue(popG, popH, "t2", 1, RngStream(seed))
        values.add(res.p_value)
    assert values.issubset({0.5, 1.0})


def test_p_value_grid():
    popG, popH = sampled_pops(12, 4, 0.6, 0.3, 3)
    B = 19
    for seed in range(10):
        res = permutation_pvalue(popG, popH, "t1", B, RngStream(seed))
        k = round(res.p_value * (B + 1))
        assert 1 <= k <= B + 1
        assert res.p_value == pytest.approx(k / (B + 1))


def test_determinism_given_stream():
    popG, popH = sampled_pops(15, 4, 0.5, 0.2, 4)
    a = permutation_pvalue(popG, popH, "t2", 59, RngStream(7), retain_null=True)
    b = permutation_pvalue(popG, popH, "t2", 59, RngStream(7), retain_null=True)
    assert a == b
    c = permutation_pvalue(popG, popH, "t2", 59, RngStream(8))
    assert c.observed == a.observed  # observed does not depend on the stream


def test_observed_matches_module_statistics():
    popG, popH = sampled_pops(14, 5, 0.6, 0.25, 5)
    res1 = permutation_pvalue(popG, popH, "t1", 9, RngStream(1))
    assert res1.observed == t1_statistic(popG, popH).t1
    res2 = permutation_pvalue(popG, popH, "t2", 9, RngStream(1))
    assert res2.observed == pytest.approx(t2_statistic(popG, popH).t2, rel=1e-12)


def test_null_draws_retained_on_request():
    popG, popH = sampled_pops(8, 3, 0.5, 0.5, 6)
    res = permutation_pvalue(popG, popH, "t2", 11, RngStream(2), retain_null=True)
    assert res.null_draws is not None and len(res.null_draws) == 11
    count = sum(1 for x in res.null_draws if x >= res.observed)
    assert res.p_value == pytest.approx((1 + count) / 12)
    bare = permutation_pvalue(popG, popH, "t2", 11, RngStream(2))
    assert bare.null_draws is None


def test_sample_size_preconditions():
    popG = pop_of(EDGE)
    popH = pop_of([[0, 0], [0, 0]])
    with pytest.raises(SampleSizeError):
        permutation_pvalue(popG, popH, "t1", 9, RngStream(0))
    res = permutation_pvalue(popG, popH, "t2", 9, RngStream(0))
    assert 0 < res.p_value <= 1.0
    with pytest.raises(ValueError):
        permutation_pvalue(popG, popH, "t2", 0, RngStream(0))
    with pytest.raises(ValueError):
        permutation_pvalue(popG, popH, "bogus", 9, RngStream(0))


def test_permutation_test_decision_semantics():
    popG, popH = sampled_pops(10, 3, 0.5, 0.5, 7)
    out = permutation_test(popG, popG, "t2", 0.5, 19, RngStream(1))
    assert not out.reject  # identical populations: p = 1
    out_alpha_one = permutation_test(popG, popH, "t2", 1.0, 19, RngStream(1))
    assert out_alpha_one.reject  # p <= 1 always
    assert out_alpha_one.test == "perm_t2"
    assert out_alpha_one.guarantee.rho_min is None


def test_strong_separation_rejects():
    popG, popH = sampled_pops(40, 10, 0.7, 0.1, 8)
    out = permutation_test(popG, popH, "t2", 0.05, 99, RngStream(3))
    assert out.reject
    out1 = permutation_test(popG, popH, "t1", 0.05, 99, RngStream(3))
    assert out1.reject


def test_identity_relabeling_ties_bit_exactly():
    # With 2m = 4 pooled graphs, one third of uniform relabelings
    # reproduce the original split (identity or full swap); each must
    # compare == observed, keeping p above ~1/3 no matter how separated
    # the populations are.
    popG, popH = sampled_pops(30, 2, 0.9, 0.05, 9)
    res = permutation_pvalue(popG, popH, "t2", 199, RngStream(4), retain_null=True)
    ties = sum(1 for x in res.null_draws if x == res.observed)
    assert ties >= 40  # Binomial(199, 1/3) is far above 40 w.o.p.
    assert res.p_value > 0.2


def test_null_validity_reduced_monte_carlo():
    # P(p <= alpha) <= alpha + Monte Carlo slack under the null.
    pair = it.constant_pair(25, 0.3, 0.3)
    reps, B, m = 400, 39, 6
    pvals = []
    for t in range(reps):
        base = RngStream(2025)
        popG = it.sample_population(pair.P, m, base.child(2 * t))
        popH = it.sample_population(pair.Q, m, base.child(2 * t + 1))
        res = permutation_pvalue(popG, popH, "t2", B, base.child(2 * t).child(2**31 - 1))
        pvals.append(res.p_value)
    pvals = np.asarray(pvals)
    for alpha in (0.05, 0.1, 0.25):
        frac = (pvals <= alpha).mean()
        assert frac <= alpha + 3 * math.sqrt(alpha * (1 - alpha) / reps)


def test_strong_separation_power_monte_carlo():
    # Well-separated two-block alternative at moderate size: calibrated
    # power is essentially one.
    pair = it.two_block_pair_with_s2(40, 0.3, 3.0 / math.sqrt(10))
    spec = it.TrialSpec("perm_t2", pair, 10, 0.05, 120, 606)
    est = it.empirical_rejection_rate(spec)
    assert est.rejection_rate >= 0.9


def test_split_half_recomputed_on_permuted_order():
    # A hand-built case where ordering matters: with pooled graphs
    # [A, A, B, B] the relabeling (A, B | A, B) must give t1 = 0
    # (each half-difference is A - B and B - A... nonzero), while
    # (A, A | B, B) reproduces the observed statistic.  We verify the
    # permuted statistics take more than one distinct value, which
    # requires the split-half structure to follow the permuted order.
    A = it.validate_adjacency(np.triu(np.ones((6, 6)), 1) + np.triu(np.ones((6, 6)), 1).T)
    B = it.validate_adjacency(np.zeros((6, 6)))
    popG = GraphPopulation((A, A))
    popH = GraphPopulation((B, B))
    res = permutation_pvalue(popG, popH, "t1", 400, RngStream(11), retain_null=True)
    assert len(set(res.null_draws)) > 1
    assert res.observed == max(res.null_draws)
