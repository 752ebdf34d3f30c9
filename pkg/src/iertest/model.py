"""Domain types for inhomogeneous Erdos-Renyi (IER) graph models.

An IER model on n vertices is a symmetric matrix P in [0,1]^{n x n} with
zero diagonal; edge (i,j) of a sampled graph is an independent
Bernoulli(P_ij).  This module holds the model/graph/population types,
seeded sampling, the elementary matrix norms, and the separation and
sparsity functionals of a model pair.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AsymmetryError,
    DegenerateDenominatorError,
    DimensionError,
    NonzeroDiagonalWarning,
    RangeError,
)
from .rng import RngStream

SYMMETRY_TOL = 1e-12
RANGE_TOL = 1e-12
DIAGONAL_TOL = 1e-12

# Denominators below this are treated as exact zeros for the 0/0 = 0 rule.
ZERO_FLOOR = 1e-300


def _check_square(raw: np.ndarray, what: str) -> np.ndarray:
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{what} must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise DimensionError(f"{what} must have at least one vertex")
    return arr


def symmetrized(raw: np.ndarray) -> np.ndarray:
    """Exactly symmetric copy built by mirroring the upper triangle."""
    upper = np.triu(np.asarray(raw, dtype=np.float64), 1)
    return upper + upper.T


@dataclass(frozen=True)
class ProbabilityMatrix:
    """Population adjacency: symmetric, zero diagonal, entries in [0, 1].

    Construct through ``validate_prob_matrix`` (or ``constant_model``);
    the dataclass itself re-checks the invariants.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = _check_square(self.entries, "probability matrix")
        if not np.array_equal(arr, arr.T):
            raise AsymmetryError("probability matrix is not exactly symmetric")
        if np.any(np.diagonal(arr) != 0.0):
            raise RangeError("probability matrix must have a zero diagonal")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise RangeError("probability entries must lie in [0, 1]")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class AdjacencyMatrix:
    """One sampled graph: symmetric 0/1 matrix with zero diagonal."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"adjacency must be square, got shape {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise RangeError("adjacency entries must be 0 or 1")
        arr = arr.astype(np.int8)
        if not np.array_equal(arr, arr.T):
            raise AsymmetryError("adjacency matrix is not symmetric")
        if np.any(np.diagonal(arr) != 0):
            raise RangeError("adjacency matrix must have a zero diagonal")
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def edge_count(self) -> int:
        return int(self.entries.sum()) // 2


@dataclass(frozen=True)
class GraphPopulation:
    """Ordered i.i.d. sample of m >= 1 graphs on a common vertex set."""

    graphs: tuple[AdjacencyMatrix, ...]

    def __post_init__(self):
        graphs = tuple(self.graphs)
        if len(graphs) < 1:
            raise DimensionError("a population needs at least one graph")
        n = graphs[0].n
        if any(g.n != n for g in graphs):
            raise DimensionError("all graphs in a population must share n")
        object.__setattr__(self, "graphs", graphs)

    @property
    def n(self) -> int:
        return self.graphs[0].n

    @property
    def m(self) -> int:
        return len(self.graphs)

    def stack(self) -> np.ndarray:
        """(m, n, n) int8 array of the adjacency matrices, in order."""
        return np.stack([g.entries for g in self.graphs])


@dataclass(frozen=True)
class ModelPair:
    """theta = (P, Q): the object every test and functional consumes."""

    P: ProbabilityMatrix
    Q: ProbabilityMatrix

    def __post_init__(self):
        if self.P.n != self.Q.n:
            raise DimensionError(
                f"model pair must share n, got {self.P.n} and {self.Q.n}"
            )

    @property
    def n(self) -> int:
        return self.P.n


def validate_prob_matrix(raw) -> ProbabilityMatrix:
    """Validate a raw square grid of reals and return a ProbabilityMatrix.

    The diagonal is forced to zero (warning if it was nonzero beyond
    tolerance), asymmetry beyond 1e-12 is an error, off-diagonal entries
    outside [0, 1] beyond 1e-12 are an error, inside the slack they are
    clamped.
    """
    arr = _check_square(raw, "probability matrix")
    asym = np.abs(arr - arr.T).max() if arr.size else 0.0
    if asym > SYMMETRY_TOL:
        raise AsymmetryError(
            f"matrix is asymmetric: max |a_ij - a_ji| = {asym:.3e} > {SYMMETRY_TOL:.0e}"
        )
    diag = np.abs(np.diagonal(arr))
    if diag.size and diag.max() > DIAGONAL_TOL:
        warnings.warn(
            f"diagonal entries up to {diag.max():.3e} were zeroed",
            NonzeroDiagonalWarning,
            stacklevel=2,
        )
    sym = symmetrized(arr)
    off = ~np.eye(sym.shape[0], dtype=bool)
    lo, hi = sym[off].min() if off.any() else 0.0, sym[off].max() if off.any() else 0.0
    if lo < -RANGE_TOL or hi > 1.0 + RANGE_TOL:
        raise RangeError(
            f"off-diagonal entries must lie in [0, 1]; saw range [{lo!r}, {hi!r}]"
        )
    return ProbabilityMatrix(np.clip(sym, 0.0, 1.0))


def validate_adjacency(raw) -> AdjacencyMatrix:
    """Validate a raw square 0/1 grid and return an AdjacencyMatrix."""
    arr = _check_square(raw, "adjacency matrix")
    if not np.isin(arr, (0.0, 1.0)).all():
        raise RangeError("adjacency entries must be exactly 0 or 1")
    if not np.array_equal(arr, arr.T):
        raise AsymmetryError("adjacency matrix is not symmetric")
    if np.any(np.diagonal(arr) != 0.0):
        raise RangeError("adjacency matrix must have a zero diagonal")
    return AdjacencyMatrix(arr.astype(np.int8))


def constant_model(n: int, p: float) -> ProbabilityMatrix:
    """Homogeneous model: every off-diagonal entry equals p."""
    if not 0.0 <= p <= 1.0:
        raise RangeError(f"edge probability must be in [0, 1], got {p!r}")
    ent = np.full((n, n), float(p))
    np.fill_diagonal(ent, 0.0)
    return ProbabilityMatrix(ent)


def sample_ier(P: ProbabilityMatrix, rng: RngStream) -> AdjacencyMatrix:
    """Draw one graph from IER(P).

    Each upper-triangle entry (row-major, i < j) is an independent
    Bernoulli(P_ij) consuming the stream in that fixed order, mirrored
    below the diagonal.  Deterministic given the stream.
    """
    n = P.n
    gen = rng.generator()
    iu = np.triu_indices(n, 1)
    u = gen.random(iu[0].size)
    ent = np.zeros((n, n), dtype=np.int8)
    bits = (u < P.entries[iu]).astype(np.int8)
    ent[iu] = bits
    ent[iu[1], iu[0]] = bits
    return AdjacencyMatrix(ent)


def sample_population(P: ProbabilityMatrix, m: int, rng: RngStream) -> GraphPopulation:
    """Draw m i.i.d. graphs from IER(P); graph k uses sub-stream rng.child(k)."""
    if m < 1:
        raise DimensionError(f"population size must be >= 1, got {m}")
    return GraphPopulation(tuple(sample_ier(P, rng.child(k)) for k in range(m)))


def frobenius_norm(M) -> float:
    """Root of the sum of squares of all entries."""
    arr = np.asarray(M, dtype=np.float64)
    return float(np.sqrt(np.sum(arr * arr)))


def row_sum_norm(M) -> float:
    """Maximum absolute row sum (induced infinity norm)."""
    arr = np.asarray(M, dtype=np.float64)
    if arr.size == 0:
        return 0.0
    return float(np.abs(arr).sum(axis=1).max())


def ratio_zero_convention(numerator: float, denominator: float) -> float:
    """num / den with the 0/0 = 0 convention.

    A vanishing denominator against a non-vanishing numerator is
    impossible for the functionals computed here (|P-Q| <= P+Q
    entrywise) and is reported as a bug rather than silently mapped.
    """
    if denominator < ZERO_FLOOR:
        if numerator < ZERO_FLOOR:
            return 0.0
        raise DegenerateDenominatorError(
            f"numerator {numerator!r} over vanishing denominator {denominator!r}"
        )
    return float(numerator) / float(denominator)


def separation_s1(pair: ModelPair) -> float:
    """Frobenius separation: ||P-Q||_F / sqrt(||P+Q||_F), with 0/0 = 0."""
    num = frobenius_norm(pair.P.entries - pair.Q.entries)
    den = np.sqrt(frobenius_norm(pair.P.entries + pair.Q.entries))
    return ratio_zero_convention(num, den)


def complexity_c1(pair: ModelPair) -> float:
    """Frobenius sparsity scale of the pair: ||P+Q||_F."""
    return frobenius_norm(pair.P.entries + pair.Q.entries)


def separation_s2(pair: ModelPair) -> float:
    """Operator-norm separation: ||P-Q||_op / sqrt(||P+Q||_r), with 0/0 = 0."""
    from .spectral import operator_norm

    num = operator_norm(pair.P.entries - pair.Q.entries)
    den = np.sqrt(row_sum_norm(pair.P.entries + pair.Q.entries))
    return ratio_zero_convention(num, den)


def complexity_c2(pair: ModelPair) -> float:
    """Degree-scale sparsity of the pair: ||P+Q||_r."""
    return row_sum_norm(pair.P.entries + pair.Q.entries)


def expected_edges(P: ProbabilityMatrix) -> float:
    """Expected number of edges of a sampled graph: half the entry sum."""
    return float(P.entries.sum()) / 2.0


def max_expected_degree(P: ProbabilityMatrix) -> float:
    """Maximum expected degree: largest row sum of P."""
    return row_sum_norm(P.entries)


def relabel(matrix: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Apply one vertex relabeling to a square matrix: M[perm][:, perm]."""
    perm = np.asarray(perm)
    return np.asarray(matrix)[np.ix_(perm, perm)]
