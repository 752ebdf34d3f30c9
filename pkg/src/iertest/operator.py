"""Operator-norm statistic T2, its data-dependent exponent, and tests.

T2 is the operator norm of the summed adjacency difference, normalized
by the square root of the maximum row sum of the summed adjacency total:

    T2 = || sum_k (A_Gk - A_Hk) ||_op / sqrt(|| sum_k (A_Gk + A_Hk) ||_r)

Unlike the split-sample Frobenius statistic, T2 is well defined and its
test certified from m = 1 on.  Both aggregate matrices are built in
integer arithmetic; only the spectral computation is floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominatorError, DimensionError, NoConvergence
from .model import GraphPopulation
from .outcomes import GuaranteeRegion, TestOutcome
from .rng import RngStream
from .spectral import SpectralConfig, operator_norm


@dataclass(frozen=True)
class T2Components:
    """Aggregate norms, the ratio, and the data-dependent exponent kappa.

    kappa = max(1, floor((s_plus_rowsum / (2 m e^2))^{1/4})); it feeds
    the data-dependent rejection threshold of thm4_test.
    """

    s_minus_norm: float
    s_plus_rowsum: int
    t2: float
    kappa: int
    m: int


def aggregate_matrices(
    popG: GraphPopulation, popH: GraphPopulation
) -> tuple[np.ndarray, np.ndarray]:
    """Integer difference and total sums over the paired populations."""
    if popG.n != popH.n:
        raise DimensionError(f"populations differ in n: {popG.n} vs {popH.n}")
    if popG.m != popH.m:
        raise DimensionError(f"populations differ in m: {popG.m} vs {popH.m}")
    xg = popG.stack().astype(np.int64)
    xh = popH.stack().astype(np.int64)
    return (xg - xh).sum(axis=0), (xg + xh).sum(axis=0)


def kappa_exponent(s_plus_rowsum: int, m: int) -> int:
    """max(1, floor of the fourth root of s_plus_rowsum / (2 m e^2)).

    The floor is applied to the double-precision fourth root; ties at
    exact integers floor toward the smaller exponent, which yields the
    larger, more conservative threshold.
    """
    ratio = float(s_plus_rowsum) / (2.0 * m * math.e**2)
    return max(1, math.floor(ratio**0.25))


def t2_statistic(
    popG: GraphPopulation,
    popH: GraphPopulation,
    cfg: SpectralConfig | None = None,
    rng: RngStream | None = None,
) -> T2Components:
    """Compute T2 and kappa; works for any m >= 1.

    Raises NoConvergence (carrying the best spectral estimate) when the
    iterative operator-norm path fails; the threshold tests catch it and
    return a flagged outcome instead.
    """
    s_minus, s_plus = aggregate_matrices(popG, popH)
    s_plus_rowsum = int(s_plus.sum(axis=1).max())
    s_minus_norm = operator_norm(s_minus.astype(np.float64), cfg, rng)
    if s_plus_rowsum == 0:
        # An all-zero total forces an all-zero difference: 0/0 = 0.
        if s_minus_norm != 0.0:
            raise DegenerateDenominatorError(
                "nonzero difference norm with zero total row sum"
            )
        t2 = 0.0
    else:
        t2 = s_minus_norm / math.sqrt(s_plus_rowsum)
    return T2Components(
        s_minus_norm=s_minus_norm,
        s_plus_rowsum=s_plus_rowsum,
        t2=t2,
        kappa=kappa_exponent(s_plus_rowsum, popG.m),
        m=popG.m,
    )


def _failed_outcome(test: str, eta: float, exc: NoConvergence, guarantee: GuaranteeRegion) -> TestOutcome:
    indicators = {"spectral_converged": False}
    return TestOutcome(
        test=test,
        statistic=float("nan"),
        thresholds={},
        indicators=indicators,
        reject=False,
        eta=eta,
        guarantee=guarantee,
        components={
            "best_estimate": exc.best_estimate,
            "iterations": float(exc.iterations),
        },
        failed=True,
    )


def thm4_guarantee(n: int, m: int, eta: float, delta: float | None = None) -> GuaranteeRegion:
    """Certified region of the data-dependent threshold test.

    delta >= 1 trades sparsity floor against detectable separation; it
    is a report parameter only and never changes the decision rule.  The
    default delta = ln(8n/eta) gives the floor (6 ln(8n/eta))^4 and the
    separation 24 sqrt(e/m).
    """
    if delta is None:
        delta = math.log(8.0 * n / eta)
    if delta < 1.0:
        raise ValueError(f"delta must be >= 1, got {delta!r}")
    cc_min = max((6.0 * delta) ** 4, (8.0 / m) * math.log(10.0 * n / eta))
    rho_min = (24.0 / math.sqrt(m)) * (8.0 * n / eta) ** (1.0 / (2.0 * delta))
    return GuaranteeRegion(
        rho_min=rho_min,
        cc_min=cc_min,
        description=(
            "risk <= eta for pairs with separation_s2 >= rho_min and "
            "complexity_c2 >= cc_min (region parameterized by delta)"
        ),
        delta=delta,
    )


def thm4_test(
    popG: GraphPopulation,
    popH: GraphPopulation,
    eta: float,
    delta: float | None = None,
    cfg: SpectralConfig | None = None,
    rng: RngStream | None = None,
) -> TestOutcome:
    """Operator-norm test with the data-dependent threshold.

    Reject iff T2 > 8 (8n/eta)^{1/(2 kappa)} where kappa comes from the
    same data; no smoothing or plug-in replaces it.  Spectral
    non-convergence yields a flagged outcome rather than a decision.
    """
    _check_eta(eta)
    n, m = popG.n, popG.m
    guarantee = thm4_guarantee(n, m, eta, delta)
    try:
        comps = t2_statistic(popG, popH, cfg, rng)
    except NoConvergence as exc:
        return _failed_outcome("thm4", eta, exc, guarantee)
    thr = 8.0 * (8.0 * n / eta) ** (1.0 / (2.0 * comps.kappa))
    indicators = {"t2_above_threshold": comps.t2 > thr}
    return TestOutcome(
        test="thm4",
        statistic=comps.t2,
        thresholds={"t2": thr, "kappa": float(comps.kappa)},
        indicators=indicators,
        reject=all(indicators.values()),
        eta=eta,
        guarantee=guarantee,
        components={
            "s_minus_norm": comps.s_minus_norm,
            "s_plus_rowsum": float(comps.s_plus_rowsum),
            "kappa": float(comps.kappa),
        },
    )


def thm6_test(
    popG: GraphPopulation,
    popH: GraphPopulation,
    eta: float,
    cfg: SpectralConfig | None = None,
    rng: RngStream | None = None,
) -> TestOutcome:
    """Sparse-regime operator-norm test with a row-sum gate.

    Reject iff T2 > 6 sqrt(ln(4n/eta)) AND the total row-sum norm
    exceeds 37 ln(4n/eta).  Certified for separation at least
    sqrt((148/m) ln(4n/eta)) with no sparsity floor.
    """
    _check_eta(eta)
    n, m = popG.n, popG.m
    log_term = math.log(4.0 * n / eta)
    guarantee = GuaranteeRegion(
        rho_min=math.sqrt((148.0 / m) * log_term),
        cc_min=0.0,
        description=(
            "risk <= eta for pairs with separation_s2 >= rho_min; "
            "no sparsity floor"
        ),
    )
    try:
        comps = t2_statistic(popG, popH, cfg, rng)
    except NoConvergence as exc:
        return _failed_outcome("thm6", eta, exc, guarantee)
    t2_thr = 6.0 * math.sqrt(log_term)
    rowsum_thr = 37.0 * log_term
    indicators = {
        "t2_above_threshold": comps.t2 > t2_thr,
        "rowsum_above_threshold": comps.s_plus_rowsum > rowsum_thr,
    }
    return TestOutcome(
        test="thm6",
        statistic=comps.t2,
        thresholds={"t2": t2_thr, "s_plus_rowsum": rowsum_thr},
        indicators=indicators,
        reject=all(indicators.values()),
        eta=eta,
        guarantee=guarantee,
        components={
            "s_minus_norm": comps.s_minus_norm,
            "s_plus_rowsum": float(comps.s_plus_rowsum),
            "kappa": float(comps.kappa),
        },
    )


def power_lower_bound(n: int, m: int, s2: float) -> float:
    """Guaranteed power of the sparse-regime test at separation s2.

    max(0, 1 - 3n exp(-m s2^2 / 12)); vacuous for small s2 and tends to
    one as m s2^2 outgrows ln n.  Valid wherever the thm6 separation
    condition holds.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    if s2 < 0:
        raise ValueError(f"s2 must be nonnegative, got {s2!r}")
    return max(0.0, 1.0 - 3.0 * n * math.exp(-m * s2 * s2 / 12.0))


def _check_eta(eta: float) -> None:
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie in (0, 1), got {eta!r}")
