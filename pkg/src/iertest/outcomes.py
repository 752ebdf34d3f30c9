"""Decision records returned by every test in the library."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class GuaranteeRegion:
    """The (separation, sparsity) region on which a decision is certified.

    rho_min: smallest separation the rule is guaranteed to detect
        (None when no closed-form certificate applies, e.g. permutation
        calibration).
    cc_min: sparsity floor the certificate assumes (0 means none).
    delta: report parameter of the operator-norm certificate, if any.
    """

    rho_min: float | None
    cc_min: float
    description: str
    delta: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "rho_min": self.rho_min,
            "cc_min": self.cc_min,
            "delta": self.delta,
            "description": self.description,
        }


@dataclass(frozen=True)
class TestOutcome:
    """One binary decision plus everything needed to audit it.

    ``reject`` is always the conjunction of ``indicators``; a test with
    a single threshold has a single indicator.  ``failed`` marks spectral
    non-convergence: the outcome then carries the best estimate in
    ``components`` and decides nothing (reject stays False, and the lone
    indicator records the failed convergence).
    """

    test: str
    statistic: float
    thresholds: dict[str, float]
    indicators: dict[str, bool]
    reject: bool
    eta: float
    guarantee: GuaranteeRegion
    components: dict[str, float] = field(default_factory=dict)
    failed: bool = False

    def __post_init__(self):
        if self.reject != all(self.indicators.values()):
            raise ValueError("reject must equal the conjunction of all indicators")
        # (0, 1] rather than (0, 1): permutation tests admit alpha = 1,
        # where the add-one p-value makes rejection certain.
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "test": self.test,
            "statistic": self.statistic,
            "thresholds": dict(self.thresholds),
            "indicators": dict(self.indicators),
            "reject": self.reject,
            "eta": self.eta,
            "guarantee": self.guarantee.to_dict(),
            "components": dict(self.components),
            "failed": self.failed,
        }
