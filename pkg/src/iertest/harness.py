"""Seeded Monte Carlo estimation of rejection rates, risk, and sweeps.

Every trial owns disjoint sub-streams of the master seed: population G
of trial t draws from (master_seed, 2t), population H from
(master_seed, 2t+1), and permutation replicates from a reserved child of
the G stream.  Results are therefore independent of execution order and
of the degree of parallelism; re-running with any thread count
reproduces the counts bit for bit.

The worst-case risk of a test over the (infinite) null and alternative
classes is approximated by maxima over finite user-supplied grids; the
grids travel with the output so the approximation is auditable.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import ConfigError
from .families import build_pair
from .frobenius import thm1_test, thm3_test
from .model import ModelPair, sample_population, separation_s2
from .operator import power_lower_bound, thm4_test, thm6_test
from .outcomes import TestOutcome
from .permutation import permutation_test
from .rng import RngStream, derive_seed

TEST_IDS = ("thm1", "thm3", "thm4", "thm6", "perm_t1", "perm_t2")

# Reserved child index for the permutation stream of a trial; far above
# any population sub-stream index (those run 0..m-1).
_PERM_CHILD = 2**31 - 1


@dataclass(frozen=True)
class TrialSpec:
    """One Monte Carlo experiment: a test, a model pair, and seeding."""

    test_id: str
    pair: ModelPair
    m: int
    eta: float
    trials: int
    master_seed: int
    B: int = 99

    def __post_init__(self):
        if self.test_id not in TEST_IDS:
            raise ConfigError(f"test_id must be one of {TEST_IDS}, got {self.test_id!r}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not 0.0 < self.eta < 1.0:
            raise ConfigError(f"eta must lie in (0, 1), got {self.eta!r}")
        if self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if self.B < 1:
            raise ConfigError(f"B must be >= 1, got {self.B}")


@dataclass(frozen=True)
class RiskEstimate:
    """Empirical rejection rate with exact counts and binomial error bar.

    failures counts trials whose spectral computation did not converge;
    those decide nothing and are excluded from rejections but not from
    the trial count, so rejection_rate * trials stays an integer.
    """

    rejections: int
    trials: int
    failures: int
    seed: int

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.trials

    @property
    def std_error(self) -> float:
        r = self.rejection_rate
        return math.sqrt(r * (1.0 - r) / self.trials)


def run_trial(spec: TrialSpec, t: int) -> TestOutcome:
    """Run trial index t of the spec; deterministic in (spec, t)."""
    base = RngStream(spec.master_seed)
    stream_g = base.child(2 * t)
    stream_h = base.child(2 * t + 1)
    pop_g = sample_population(spec.pair.P, spec.m, stream_g)
    pop_h = sample_population(spec.pair.Q, spec.m, stream_h)
    if spec.test_id == "thm1":
        return thm1_test(pop_g, pop_h, spec.eta)
    if spec.test_id == "thm3":
        return thm3_test(pop_g, pop_h, spec.eta)
    if spec.test_id == "thm4":
        return thm4_test(pop_g, pop_h, spec.eta)
    if spec.test_id == "thm6":
        return thm6_test(pop_g, pop_h, spec.eta)
    statistic = "t1" if spec.test_id == "perm_t1" else "t2"
    perm_rng = stream_g.child(_PERM_CHILD)
    return permutation_test(pop_g, pop_h, statistic, spec.eta, spec.B, perm_rng)


def _map_trials(spec: TrialSpec, threads: int) -> list[TestOutcome]:
    if threads <= 1:
        return [run_trial(spec, t) for t in range(spec.trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda t: run_trial(spec, t), range(spec.trials)))


def empirical_rejection_rate(spec: TrialSpec, threads: int = 1) -> RiskEstimate:
    """Rejection count over spec.trials seeded trials.

    Aggregation is a commutative integer sum, so serial and parallel
    execution produce identical estimates.
    """
    outcomes = _map_trials(spec, threads)
    rejections = sum(1 for o in outcomes if o.reject)
    failures = sum(1 for o in outcomes if o.failed)
    return RiskEstimate(
        rejections=rejections,
        trials=spec.trials,
        failures=failures,
        seed=spec.master_seed,
    )


@dataclass(frozen=True)
class RiskRecord:
    """Grid approximation of worst-case risk.

    type1_max: largest rejection rate over the null grid (0 if empty).
    type2_max: largest acceptance rate over the alternative grid (0 if
    empty).  risk is their sum.
    """

    type1_max: float
    type2_max: float
    risk: float
    null_estimates: tuple[RiskEstimate, ...] = field(default_factory=tuple)
    alt_estimates: tuple[RiskEstimate, ...] = field(default_factory=tuple)


def empirical_risk(
    test_id: str,
    null_grid: Sequence[ModelPair],
    alt_grid: Sequence[ModelPair],
    m: int,
    eta: float,
    trials: int,
    seed: int,
    B: int = 99,
    threads: int = 1,
) -> RiskRecord:
    """Max Type-I rate over the null grid plus max Type-II over the alt grid.

    Each grid cell gets its own derived master seed, so the record is
    reproducible from (grids, seed) alone.
    """

    def estimate(pair: ModelPair, kind: int, idx: int) -> RiskEstimate:
        spec = TrialSpec(
            test_id=test_id,
            pair=pair,
            m=m,
            eta=eta,
            trials=trials,
            master_seed=derive_seed(seed, kind, idx),
            B=B,
        )
        return empirical_rejection_rate(spec, threads)

    null_estimates = tuple(estimate(p, 0, i) for i, p in enumerate(null_grid))
    alt_estimates = tuple(estimate(p, 1, i) for i, p in enumerate(alt_grid))
    type1 = max((e.rejection_rate for e in null_estimates), default=0.0)
    type2 = max((1.0 - e.rejection_rate for e in alt_estimates), default=0.0)
    return RiskRecord(
        type1_max=type1,
        type2_max=type2,
        risk=type1 + type2,
        null_estimates=null_estimates,
        alt_estimates=alt_estimates,
    )


SWEEP_COLUMNS = (
    "test",
    "n",
    "m",
    "eta",
    "param_name",
    "param_value",
    "trials",
    "rejections",
    "failures",
    "rate",
    "std_error",
    "seed",
)

POWER_COLUMNS = (
    "s",
    "s2",
    "test",
    "n",
    "m",
    "eta",
    "trials",
    "rejections",
    "failures",
    "power",
    "std_error",
    "power_bound",
    "seed",
)


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


@dataclass(frozen=True)
class SweepConfig:
    """Axes and scalar defaults of one sweep, usually read from JSON.

    tests, ns, ms, etas and param_values are axes; their Cartesian
    product (in that order) enumerates the cells.  family names a
    registered pair constructor receiving (n, m, param_value) plus
    family_args.
    """

    tests: tuple[str, ...]
    ns: tuple[int, ...]
    ms: tuple[int, ...]
    etas: tuple[float, ...]
    family: str
    param_name: str
    param_values: tuple[float, ...]
    trials: int
    seed: int = 0
    B: int = 99
    family_args: dict = field(default_factory=dict)

    REQUIRED = ("test", "n", "m", "eta", "family", "param_name", "param_values", "trials")

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepConfig":
        for key in cls.REQUIRED:
            if key not in doc:
                raise ConfigError(f"sweep config is missing required field {key!r}")
        known = set(cls.REQUIRED) | {"seed", "B", "family_args"}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"sweep config has unknown fields: {sorted(unknown)}")
        tests = tuple(str(t) for t in _as_list(doc["test"]))
        for t in tests:
            if t not in TEST_IDS:
                raise ConfigError(f"unknown test id {t!r}; known: {TEST_IDS}")
        return cls(
            tests=tests,
            ns=tuple(int(v) for v in _as_list(doc["n"])),
            ms=tuple(int(v) for v in _as_list(doc["m"])),
            etas=tuple(float(v) for v in _as_list(doc["eta"])),
            family=str(doc["family"]),
            param_name=str(doc["param_name"]),
            param_values=tuple(float(v) for v in _as_list(doc["param_values"])),
            trials=int(doc["trials"]),
            seed=int(doc.get("seed", 0)),
            B=int(doc.get("B", 99)),
            family_args=dict(doc.get("family_args", {})),
        )

    def cells(self) -> list[tuple]:
        return list(itertools.product(self.tests, self.ns, self.ms, self.etas, self.param_values))


def sweep(config: SweepConfig, threads: int = 1, start_cell: int = 0) -> list[dict]:
    """One RiskEstimate row per cell, in deterministic cell order.

    start_cell resumes an interrupted sweep: cell seeds depend only on
    the cell index, so a restarted run emits identical rows.
    """
    rows = []
    for index, (test_id, n, m, eta, param) in enumerate(config.cells()):
        if index < start_cell:
            continue
        pair = build_pair(config.family, n, m, param, **config.family_args)
        cell_seed = derive_seed(config.seed, index)
        spec = TrialSpec(
            test_id=test_id,
            pair=pair,
            m=m,
            eta=eta,
            trials=config.trials,
            master_seed=cell_seed,
            B=config.B,
        )
        est = empirical_rejection_rate(spec, threads)
        rows.append(
            {
                "test": test_id,
                "n": n,
                "m": m,
                "eta": eta,
                "param_name": config.param_name,
                "param_value": param,
                "trials": est.trials,
                "rejections": est.rejections,
                "failures": est.failures,
                "rate": est.rejection_rate,
                "std_error": est.std_error,
                "seed": cell_seed,
            }
        )
    return rows


def power_curve(
    test_id: str,
    family: str | Callable[..., ModelPair],
    s_values: Sequence[float],
    n: int,
    m: int,
    eta: float,
    trials: int,
    seed: int,
    B: int = 99,
    family_args: dict | None = None,
    threads: int = 1,
) -> list[dict]:
    """Empirical power along a separation-parameterized family.

    Each row carries the family parameter s, the realized separation_s2
    of the pair, the empirical power, and the closed-form power bound at
    that separation.  Wherever the sparse-regime separation condition
    holds, empirical power should weakly dominate the bound up to Monte
    Carlo error.
    """
    family_args = family_args or {}
    rows = []
    for index, s in enumerate(s_values):
        if callable(family):
            pair = family(n, m, s, **family_args)
        else:
            pair = build_pair(family, n, m, s, **family_args)
        cell_seed = derive_seed(seed, index)
        spec = TrialSpec(
            test_id=test_id,
            pair=pair,
            m=m,
            eta=eta,
            trials=trials,
            master_seed=cell_seed,
            B=B,
        )
        est = empirical_rejection_rate(spec, threads)
        s2 = separation_s2(pair)
        rows.append(
            {
                "s": float(s),
                "s2": s2,
                "test": test_id,
                "n": n,
                "m": m,
                "eta": eta,
                "trials": est.trials,
                "rejections": est.rejections,
                "failures": est.failures,
                "power": est.rejection_rate,
                "std_error": est.std_error,
                "power_bound": power_lower_bound(n, m, s2),
                "seed": cell_seed,
            }
        )
    return rows
