"""Split-sample Frobenius statistic T1 and its threshold tests.

T1 estimates the squared Frobenius separation of the pair: the
population is split into two halves, and for every vertex pair the
half-sums of adjacency differences are multiplied, which makes the
numerator an unbiased estimate of (m_used^2/8) ||P-Q||_F^2.  The same
construction with plus signs yields the normalizer.  Everything is
accumulated in exact 64-bit integer arithmetic and only the final ratio
is floating point.

The statistic requires m >= 2: with a single graph per population no
unbiased estimate of the squared difference exists and the testing
problem itself is unsolvable at any useful separation, so m = 1 is a
hard error here rather than a degraded number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominatorError, DimensionError, SampleSizeError
from .model import GraphPopulation
from .outcomes import GuaranteeRegion, TestOutcome


@dataclass(frozen=True)
class T1Components:
    """Numerator, normalizer and ratio of the split-sample statistic.

    mu_hat and sigma_sq are exact integers; sigma_hat = sqrt(sigma_sq);
    t1 = mu_hat / sigma_hat with 0/0 = 0.  m_used is m rounded down to
    an even count (odd populations drop their final graph).
    """

    mu_hat: int
    sigma_sq: int
    sigma_hat: float
    t1: float
    m_used: int


def _check_populations(popG: GraphPopulation, popH: GraphPopulation, min_m: int) -> int:
    if popG.n != popH.n:
        raise DimensionError(f"populations differ in n: {popG.n} vs {popH.n}")
    if popG.m != popH.m:
        raise DimensionError(f"populations differ in m: {popG.m} vs {popH.m}")
    if popG.m < min_m:
        raise SampleSizeError(
            f"this statistic needs m >= {min_m} graphs per population, got m = {popG.m}"
        )
    return popG.m


def t1_statistic(popG: GraphPopulation, popH: GraphPopulation) -> T1Components:
    """Compute the split-sample components for two equal-size populations.

    The split is the first m_used/2 graphs of each population against
    the rest, in population order; no shuffling happens here (permutation
    calibration lives in its own module).
    """
    m = _check_populations(popG, popH, min_m=2)
    m_used = m if m % 2 == 0 else m - 1
    half = m_used // 2

    xg = popG.stack()[:m_used].astype(np.int64)
    xh = popH.stack()[:m_used].astype(np.int64)
    diff = xg - xh
    tot = xg + xh

    iu = np.triu_indices(popG.n, 1)
    d_first = diff[:half].sum(axis=0)[iu]
    d_second = diff[half:].sum(axis=0)[iu]
    s_first = tot[:half].sum(axis=0)[iu]
    s_second = tot[half:].sum(axis=0)[iu]

    mu_hat = int(np.sum(d_first * d_second))
    sigma_sq = int(np.sum(s_first * s_second))
    sigma_hat = math.sqrt(sigma_sq)
    if sigma_sq == 0:
        # |half-sum of differences| <= half-sum of totals entrywise, so
        # sigma_sq == 0 forces mu_hat == 0 and the 0/0 rule applies.
        if mu_hat != 0:
            raise DegenerateDenominatorError(
                f"mu_hat = {mu_hat} with sigma_hat = 0 should be impossible"
            )
        t1 = 0.0
    else:
        t1 = mu_hat / sigma_hat
    return T1Components(mu_hat, sigma_sq, sigma_hat, t1, m_used)


def thm1_threshold(eta: float) -> float:
    """Rejection threshold of the dense-regime test: 8 sqrt(6 ln(4/eta))."""
    _check_eta(eta)
    return 8.0 * math.sqrt(6.0 * math.log(4.0 / eta))


def thm1_test(popG: GraphPopulation, popH: GraphPopulation, eta: float) -> TestOutcome:
    """Dense-regime Frobenius test: reject iff T1 > 8 sqrt(6 ln(4/eta)).

    The certificate covers pairs with sparsity scale at least
    16 sqrt(6 ln(4/eta)) and separation at least
    (8 sqrt(6) / sqrt(m)) (ln(4/eta))^{1/4}.
    """
    comps = t1_statistic(popG, popH)
    thr = thm1_threshold(eta)
    region = thm1_feasible_region(popG.n, popG.m, eta)
    indicators = {"t1_above_threshold": comps.t1 > thr}
    return TestOutcome(
        test="thm1",
        statistic=comps.t1,
        thresholds={"t1": thr},
        indicators=indicators,
        reject=all(indicators.values()),
        eta=eta,
        guarantee=GuaranteeRegion(
            rho_min=region.rho_min,
            cc_min=region.cc_min,
            description=(
                "risk <= eta for pairs with separation_s1 >= rho_min and "
                "complexity_c1 >= cc_min"
            ),
        ),
        components={
            "mu_hat": float(comps.mu_hat),
            "sigma_hat": comps.sigma_hat,
            "m_used": float(comps.m_used),
        },
    )


def thm3_test(popG: GraphPopulation, popH: GraphPopulation, eta: float) -> TestOutcome:
    """Sparse-regime Frobenius test with a data-driven sparsity gate.

    Reject iff T1 > 16 ln(20 n^2/eta) AND sigma_hat >
    400 ln^2(40/eta) ln(20 n^2/eta).  The second indicator turns the
    test off on ultra-sparse data, which is what makes the certificate
    hold with no sparsity floor at all.
    """
    _check_eta(eta)
    comps = t1_statistic(popG, popH)
    n, m = popG.n, popG.m
    t1_thr = 16.0 * math.log(20.0 * n * n / eta)
    sigma_thr = 400.0 * math.log(40.0 / eta) ** 2 * math.log(20.0 * n * n / eta)
    indicators = {
        "t1_above_threshold": comps.t1 > t1_thr,
        "sigma_above_threshold": comps.sigma_hat > sigma_thr,
    }
    rho_min = 50.0 * math.log(40.0 / eta) * math.sqrt((2.0 / m) * math.log(20.0 * n * n / eta))
    return TestOutcome(
        test="thm3",
        statistic=comps.t1,
        thresholds={"t1": t1_thr, "sigma_hat": sigma_thr},
        indicators=indicators,
        reject=all(indicators.values()),
        eta=eta,
        guarantee=GuaranteeRegion(
            rho_min=rho_min,
            cc_min=0.0,
            description=(
                "risk <= eta for pairs with separation_s1 >= rho_min; "
                "no sparsity floor"
            ),
        ),
        components={
            "mu_hat": float(comps.mu_hat),
            "sigma_hat": comps.sigma_hat,
            "m_used": float(comps.m_used),
        },
    )


@dataclass(frozen=True)
class FeasibleRegion:
    rho_min: float
    cc_min: float
    feasible: bool


def thm1_feasible_region(n: int, m: int, eta: float) -> FeasibleRegion:
    """Certified region of the dense-regime test at the given (n, m, eta).

    feasible requires m >= 2 (the m = 1 problem is unsolvable in this
    separation) and that the sparsity floor fits under the trivial cap
    n / sqrt(8) that any pair on n vertices satisfies.
    """
    _check_eta(eta)
    cc_min = 16.0 * math.sqrt(6.0 * math.log(4.0 / eta))
    rho_min = (8.0 * math.sqrt(6.0) / math.sqrt(m)) * math.log(4.0 / eta) ** 0.25
    feasible = m >= 2 and cc_min <= n / math.sqrt(8.0)
    return FeasibleRegion(rho_min=rho_min, cc_min=cc_min, feasible=feasible)


def _check_eta(eta: float) -> None:
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie in (0, 1), got {eta!r}")
