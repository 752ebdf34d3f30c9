"""Two-sample hypothesis testing for populations of inhomogeneous
Erdos-Renyi random graphs on a common vertex set.

Given m graphs sampled from each of two edge-probability models P and Q,
the library decides between P = Q and separated alternatives using a
split-sample Frobenius statistic and an operator-norm statistic, with
closed-form risk certificates, permutation calibration for practical
power at moderate sizes, matching indistinguishability lower bounds, and
a reproducible Monte Carlo harness.
"""

from .errors import (
    AsymmetryError,
    ConfigError,
    ConvergenceError,
    DegenerateDenominatorError,
    DimensionError,
    DivergentChiSquare,
    DomainError,
    IerTestError,
    MatrixFormatError,
    NoConvergence,
    NonzeroDiagonalWarning,
    RangeError,
    SampleSizeError,
    TooLargeToEnumerate,
)
from .families import (
    balanced_two_block_pair,
    build_pair,
    constant_pair,
    dense_vs_empty_pair,
    gamma_for_two_block_s2,
    two_block_pair_with_s2,
)
from .frobenius import (
    FeasibleRegion,
    T1Components,
    t1_statistic,
    thm1_feasible_region,
    thm1_test,
    thm1_threshold,
    thm3_test,
)
from .harness import (
    RiskEstimate,
    RiskRecord,
    SweepConfig,
    TrialSpec,
    empirical_rejection_rate,
    empirical_risk,
    power_curve,
    run_trial,
    sweep,
)
from .lower_bounds import (
    Thm2Construction,
    Thm5Construction,
    brute_force_chi_square,
    chi_square_thm2,
    chi_square_thm5_upper,
    critical_gamma_thm2,
    critical_gamma_thm5,
    risk_lower_bound_from_chi,
    thm2_alt_family,
    thm2_alt_sample,
    thm2_null_pair,
    thm5_alt_family,
    thm5_alt_sample,
)
from .model import (
    AdjacencyMatrix,
    GraphPopulation,
    ModelPair,
    ProbabilityMatrix,
    complexity_c1,
    complexity_c2,
    constant_model,
    expected_edges,
    frobenius_norm,
    max_expected_degree,
    row_sum_norm,
    sample_ier,
    sample_population,
    separation_s1,
    separation_s2,
    validate_adjacency,
    validate_prob_matrix,
)
from .operator import (
    T2Components,
    kappa_exponent,
    power_lower_bound,
    t2_statistic,
    thm4_test,
    thm6_test,
)
from .outcomes import GuaranteeRegion, TestOutcome
from .permutation import PermutationResult, permutation_pvalue, permutation_test
from .rng import RngStream, derive_seed
from .spectral import (
    SpectralConfig,
    operator_norm,
    operator_norm_exact,
    operator_norm_iterative,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
