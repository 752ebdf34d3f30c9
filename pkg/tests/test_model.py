"""Model types, validation, sampling, norms and functionals."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import iertest as it
from iertest import (
    AsymmetryError,
    DegenerateDenominatorError,
    DimensionError,
    ModelPair,
    NonzeroDiagonalWarning,
    RangeError,
    RngStream,
)
from iertest.model import ratio_zero_convention, relabel


def random_pair(gen, n, scale=1.0):
    """Random valid model pair with entries up to ``scale``."""
    def matrix():
        raw = np.triu(gen.random((n, n)) * scale, 1)
        return it.validate_prob_matrix(raw + raw.T)
    return ModelPair(matrix(), matrix())


# ---------------------------------------------------------------------------
# validation


def test_validate_zero_matrix():
    pm = it.validate_prob_matrix(np.zeros((2, 2)))
    assert pm.n == 2
    assert np.all(pm.entries == 0.0)


def test_validate_symmetric_in_range():
    pm = it.validate_prob_matrix([[0, 0.5], [0.5, 0]])
    assert pm.entries[0, 1] == 0.5


def test_validate_asymmetric_rejected():
    with pytest.raises(AsymmetryError):
        it.validate_prob_matrix([[0, 0.3], [0.7, 0]])


def test_validate_out_of_range_rejected():
    with pytest.raises(RangeError):
        it.validate_prob_matrix([[0, 1.5], [1.5, 0]])
    with pytest.raises(RangeError):
        it.validate_prob_matrix([[0, -0.2], [-0.2, 0]])


def test_validate_clamps_within_slack():
    eps = 5e-13
    pm = it.validate_prob_matrix([[0, 1 + eps], [1 + eps, 0]])
    assert pm.entries[0, 1] == 1.0
    pm = it.validate_prob_matrix([[0, -eps], [-eps, 0]])
    assert pm.entries[0, 1] == 0.0


def test_validate_warns_on_nonzero_diagonal():
    with pytest.warns(NonzeroDiagonalWarning):
        pm = it.validate_prob_matrix([[0.2, 0.5], [0.5, 0.1]])
    assert pm.entries[0, 0] == 0.0 and pm.entries[1, 1] == 0.0


def test_validate_rejects_non_square():
    with pytest.raises(DimensionError):
        it.validate_prob_matrix(np.zeros((2, 3)))


def test_validate_adjacency():
    adj = it.validate_adjacency([[0, 1], [1, 0]])
    assert adj.edge_count() == 1
    with pytest.raises(RangeError):
        it.validate_adjacency([[0, 2], [2, 0]])
    with pytest.raises(AsymmetryError):
        it.validate_adjacency([[0, 1], [0, 0]])


# ---------------------------------------------------------------------------
# sampling


def test_sample_zero_model_gives_empty_graphs():
    P = it.constant_model(6, 0.0)
    pop = it.sample_population(P, 3, RngStream(0))
    assert pop.m == 3
    assert all(g.edge_count() == 0 for g in pop.graphs)


def test_sample_complete_model_gives_complete_graphs():
    P = it.constant_model(5, 1.0)
    pop = it.sample_population(P, 2, RngStream(0))
    assert all(g.edge_count() == 10 for g in pop.graphs)


def test_sampling_is_deterministic():
    P = it.constant_model(12, 0.37)
    a = it.sample_population(P, 4, RngStream(99, (2,)))
    b = it.sample_population(P, 4, RngStream(99, (2,)))
    assert all(np.array_equal(x.entries, y.entries) for x, y in zip(a.graphs, b.graphs))


def test_sampled_graphs_symmetric_zero_diagonal():
    gen = np.random.default_rng(1)
    P = random_pair(gen, 9).P
    for k in range(20):
        g = it.sample_ier(P, RngStream(5).child(k))
        assert np.array_equal(g.entries, g.entries.T)
        assert np.all(np.diagonal(g.entries) == 0)
        assert np.isin(g.entries, (0, 1)).all()


def test_sample_mean_edges_matches_expected_edges():
    # Monte Carlo against the closed-form expected edge count.
    P = it.constant_model(20, 0.5)
    trials = 10_000
    base = RngStream(31)
    counts = np.array(
        [it.sample_ier(P, base.child(k)).edge_count() for k in range(trials)]
    )
    expect = it.expected_edges(P)
    assert expect == 95.0
    se = counts.std(ddof=1) / math.sqrt(trials)
    assert abs(counts.mean() - expect) <= 3 * se


def test_population_needs_positive_m():
    with pytest.raises(DimensionError):
        it.sample_population(it.constant_model(3, 0.5), 0, RngStream(0))


# ---------------------------------------------------------------------------
# norms and functionals


def test_frobenius_norm_examples():
    assert it.frobenius_norm([[0, 1], [1, 0]]) == pytest.approx(math.sqrt(2))
    assert it.frobenius_norm(np.zeros((4, 4))) == 0.0
    M = it.constant_model(3, 0.5).entries
    assert it.frobenius_norm(M) == pytest.approx(math.sqrt(1.5))


def test_row_sum_norm_examples():
    assert it.row_sum_norm([[0, 0.5], [0.5, 0]]) == 0.5
    assert it.row_sum_norm(np.zeros((3, 3))) == 0.0
    assert it.row_sum_norm([[0, 1, 1], [1, 0, 0], [1, 0, 0]]) == 2.0


def test_separation_s1_examples():
    P = it.constant_model(3, 0.5)
    assert it.separation_s1(ModelPair(P, P)) == 0.0
    Z = it.constant_model(3, 0.0)
    assert it.separation_s1(ModelPair(Z, Z)) == 0.0
    assert it.separation_s1(ModelPair(P, Z)) == pytest.approx(1.10668, abs=1e-5)


def test_complexity_c1_examples():
    P = it.constant_model(3, 0.5)
    Z = it.constant_model(3, 0.0)
    assert it.complexity_c1(ModelPair(Z, Z)) == 0.0
    assert it.complexity_c1(ModelPair(P, Z)) == pytest.approx(1.22474, abs=1e-5)
    assert it.complexity_c1(ModelPair(P, P)) == pytest.approx(2.44949, abs=1e-5)


def test_separation_s2_examples():
    P = it.validate_prob_matrix([[0, 1], [1, 0]])
    Z = it.constant_model(2, 0.0)
    assert it.separation_s2(ModelPair(P, P)) == 0.0
    assert it.separation_s2(ModelPair(P, Z)) == pytest.approx(1.0)
    assert it.separation_s2(ModelPair(Z, Z)) == 0.0


def test_complexity_c2_examples():
    Z = it.constant_model(5, 0.0)
    P = it.constant_model(5, 0.5)
    assert it.complexity_c2(ModelPair(Z, Z)) == 0.0
    assert it.complexity_c2(ModelPair(P, P)) == pytest.approx(4.0)
    E = it.validate_prob_matrix([[0, 1], [1, 0]])
    assert it.complexity_c2(ModelPair(E, it.constant_model(2, 0.0))) == 1.0


def test_expected_edges_examples():
    assert it.expected_edges(it.constant_model(4, 0.0)) == 0.0
    assert it.expected_edges(it.constant_model(3, 0.5)) == pytest.approx(1.5)
    assert it.expected_edges(it.constant_model(4, 1.0)) == 6.0


def test_max_expected_degree_examples():
    assert it.max_expected_degree(it.constant_model(4, 0.0)) == 0.0
    assert it.max_expected_degree(it.constant_model(5, 0.5)) == pytest.approx(2.0)
    assert it.max_expected_degree(it.constant_model(4, 1.0)) == 3.0


def test_ratio_zero_convention():
    assert ratio_zero_convention(0.0, 0.0) == 0.0
    assert ratio_zero_convention(1.0, 2.0) == 0.5
    with pytest.raises(DegenerateDenominatorError):
        ratio_zero_convention(1.0, 0.0)


def test_pair_dimension_mismatch():
    with pytest.raises(DimensionError):
        ModelPair(it.constant_model(3, 0.1), it.constant_model(4, 0.1))


# ---------------------------------------------------------------------------
# invariants on random pairs


@pytest.fixture(scope="module")
def pair_batch():
    gen = np.random.default_rng(2718)
    pairs = []
    for _ in range(200):
        n = int(gen.integers(2, 12))
        scale = float(gen.choice([0.05, 0.3, 1.0]))
        pairs.append(random_pair(gen, n, scale))
    return pairs


def test_difference_dominated_by_sum(pair_batch):
    for pair in pair_batch:
        diff = it.frobenius_norm(pair.P.entries - pair.Q.entries)
        tot = it.frobenius_norm(pair.P.entries + pair.Q.entries)
        assert diff <= tot + 1e-12


def test_separation_squared_bounded_by_complexity(pair_batch):
    for pair in pair_batch:
        assert it.separation_s1(pair) ** 2 <= it.complexity_c1(pair) + 1e-9
        assert it.separation_s2(pair) ** 2 <= it.complexity_c2(pair) + 1e-9


def test_edge_mass_dominates_frobenius_complexity(pair_batch):
    for pair in pair_batch:
        total = it.expected_edges(pair.P) + it.expected_edges(pair.Q)
        assert total >= 0.5 * it.complexity_c1(pair) - 1e-12


def test_relabeling_leaves_functionals_unchanged(pair_batch):
    gen = np.random.default_rng(11)
    for pair in pair_batch[:50]:
        perm = gen.permutation(pair.n)
        relabeled = ModelPair(
            it.ProbabilityMatrix(relabel(pair.P.entries, perm)),
            it.ProbabilityMatrix(relabel(pair.Q.entries, perm)),
        )
        for fn in (it.separation_s1, it.complexity_c1, it.separation_s2, it.complexity_c2):
            assert fn(relabeled) == pytest.approx(fn(pair), rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=2, max_value=8),
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_constant_pair_functionals_closed_form(n, p, q):
    pair = it.constant_pair(n, p, q)
    k = n * (n - 1)
    assert it.complexity_c1(pair) == pytest.approx((p + q) * math.sqrt(k))
    assert it.complexity_c2(pair) == pytest.approx((p + q) * (n - 1))
    expected_s1 = 0.0 if p == q else abs(p - q) * math.sqrt(k) / math.sqrt((p + q) * math.sqrt(k))
    assert it.separation_s1(pair) == pytest.approx(expected_s1, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=10), st.data())
def test_sampled_graph_within_support(n, data):
    # Edges can only appear where the model gives them positive probability.
    seed = data.draw(st.integers(min_value=0, max_value=2**32 - 1))
    gen = np.random.default_rng(seed)
    raw = np.triu((gen.random((n, n)) < 0.5) * gen.random((n, n)), 1)
    P = it.validate_prob_matrix(raw + raw.T)
    g = it.sample_ier(P, RngStream(seed))
    assert np.all(g.entries[P.entries == 0.0] == 0)
