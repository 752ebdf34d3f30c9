"""Adversarial constructions and minimax lower-bound machinery.

Two families of hard alternatives against the homogeneous null
(both models Erdos-Renyi with edge probability p):

  * sign-flip family: Q perturbs every edge probability to p +/- gamma
    with independent signs; hard for Frobenius-separation testing.
  * two-block family: Q = p + gamma v_i v_j for a random label vector
    v in {-1,+1}^n; hard for operator-norm-separation testing.

The chi-square quantity (the second moment of the likelihood ratio of
the alternative mixture against the null) bounds the minimax risk from
below via risk >= 1 - sqrt(chi^2 - 1)/2.  The sign-flip family admits a
closed form; the two-block family only an exponential upper bound, so
exact tiny-instance values come from the brute-force enumerator, which
also serves as the oracle for the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DivergentChiSquare, DomainError, TooLargeToEnumerate
from .model import ModelPair, ProbabilityMatrix, constant_model, symmetrized
from .rng import RngStream

# Hard cap on 2m * n(n-1)/2, the number of edge indicator bits enumerated.
ENUMERATION_BIT_CAP = 24

# Cap on the size of an explicitly enumerated alternative family.
FAMILY_SIZE_CAP = 4096

_CHUNK = 1 << 16


def _check_construction(n: int, p: float, gamma: float) -> None:
    if n < 2:
        raise DomainError(f"construction needs n >= 2, got {n}")
    if not 0.0 < p <= 0.5:
        raise DomainError(f"p must lie in (0, 1/2], got {p!r}")
    if not 0.0 < gamma <= p:
        raise DomainError(f"gamma must lie in (0, p], got {gamma!r}")


@dataclass(frozen=True)
class Thm2Construction:
    """Parameters of the sign-flip alternative family."""

    n: int
    p: float
    gamma: float

    def __post_init__(self):
        _check_construction(self.n, self.p, self.gamma)


@dataclass(frozen=True)
class Thm5Construction:
    """Parameters of the two-block alternative family."""

    n: int
    p: float
    gamma: float

    def __post_init__(self):
        _check_construction(self.n, self.p, self.gamma)


def thm2_null_pair(n: int, p: float) -> ModelPair:
    """The homogeneous null: every off-diagonal entry of P and Q is p."""
    return ModelPair(constant_model(n, p), constant_model(n, p))


def _signs_to_pair(n: int, p: float, gamma: float, signs: np.ndarray) -> ModelPair:
    iu = np.triu_indices(n, 1)
    q = np.zeros((n, n))
    q[iu] = p + signs * gamma
    return ModelPair(constant_model(n, p), ProbabilityMatrix(symmetrized(q)))


def thm2_alt_sample(c: Thm2Construction, rng: RngStream) -> ModelPair:
    """One draw from the sign-flip family: Q_ij = p + eps_ij gamma.

    Signs are i.i.d. uniform over the upper triangle (row-major order),
    mirrored below.  Every off-diagonal Q entry is p - gamma or
    p + gamma, so ||P - Q||_F = gamma sqrt(n(n-1)) for every draw.
    """
    gen = rng.generator()
    k = c.n * (c.n - 1) // 2
    signs = np.where(gen.random(k) < 0.5, 1.0, -1.0)
    return _signs_to_pair(c.n, c.p, c.gamma, signs)


def thm2_alt_family(n: int, p: float, gamma: float) -> list[ModelPair]:
    """The full sign-flip family: all 2^{n(n-1)/2} sign assignments."""
    _check_construction(n, p, gamma)
    k = n * (n - 1) // 2
    if 2**k > FAMILY_SIZE_CAP:
        raise TooLargeToEnumerate(
            f"sign-flip family has 2^{k} members, above the cap {FAMILY_SIZE_CAP}"
        )
    bit = np.arange(k)
    return [
        _signs_to_pair(n, p, gamma, np.where((idx >> bit) & 1 == 1, 1.0, -1.0))
        for idx in range(2**k)
    ]


def _labels_to_pair(n: int, p: float, gamma: float, v: np.ndarray) -> ModelPair:
    q = p + gamma * np.outer(v, v)
    np.fill_diagonal(q, 0.0)
    return ModelPair(constant_model(n, p), ProbabilityMatrix(symmetrized(q)))


def thm5_alt_sample(c: Thm5Construction, rng: RngStream) -> ModelPair:
    """One draw from the two-block family: Q_ij = p + gamma v_i v_j.

    v is uniform over {-1,+1}^n; v and -v give the same model, so the
    induced distribution on Q matches enumerating each model twice.
    ||P - Q||_op = gamma (n - 1) for every draw with n >= 2.
    """
    gen = rng.generator()
    v = np.where(gen.random(c.n) < 0.5, 1.0, -1.0)
    return _labels_to_pair(c.n, c.p, c.gamma, v)


def thm5_alt_family(n: int, p: float, gamma: float) -> list[ModelPair]:
    """The full two-block family: all 2^n label vectors (each model twice)."""
    _check_construction(n, p, gamma)
    if 2**n > FAMILY_SIZE_CAP:
        raise TooLargeToEnumerate(
            f"two-block family has 2^{n} members, above the cap {FAMILY_SIZE_CAP}"
        )
    bit = np.arange(n)
    return [
        _labels_to_pair(n, p, gamma, np.where((idx >> bit) & 1 == 1, 1.0, -1.0))
        for idx in range(2**n)
    ]


def chi_square_thm2(n: int, m: int, p: float, gamma: float) -> float:
    """Exact chi-square quantity of the sign-flip family against the null.

    Closed form:
        [ (1 + r)^m / 2 + (1 - r)^m / 2 ] ^ {n(n-1)/2},  r = gamma^2 / (p(1-p)).

    Equals 1 exactly when gamma = 0 or m = 1 (the inner terms average
    to one), which is why a single observation per model carries no
    information against this family.
    """
    if n < 2 or m < 1:
        raise DomainError(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    if not 0.0 <= gamma <= min(p, 1.0 - p):
        raise DomainError(f"gamma must lie in [0, min(p, 1-p)], got {gamma!r}")
    if gamma * gamma > p * (1.0 - p):
        raise DomainError("gamma^2 must not exceed p(1-p)")
    if gamma == 0.0 or m == 1:
        return 1.0
    r = gamma * gamma / (p * (1.0 - p))
    base = 0.5 * (1.0 + r) ** m + 0.5 * (1.0 - r) ** m
    return float(base ** (n * (n - 1) // 2))


def chi_square_thm5_upper(n: int, m: int, p: float, gamma: float) -> float:
    """Upper bound exp(m n gamma^2 / p) for the two-block family.

    No closed form exists for the exact value; use
    brute_force_chi_square on tiny instances when exactness matters.
    """
    if n < 2 or m < 1:
        raise DomainError(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    if gamma < 0.0:
        raise DomainError(f"gamma must be nonnegative, got {gamma!r}")
    return math.exp(m * n * gamma * gamma / p)


def risk_lower_bound_from_chi(chi: float) -> float:
    """Minimax-risk lower bound 1 - sqrt(chi - 1)/2, clamped to [0, 1]."""
    if chi < 1.0 - 1e-9:
        raise DomainError(f"chi-square quantity must be >= 1, got {chi!r}")
    return float(min(1.0, max(0.0, 1.0 - 0.5 * math.sqrt(max(chi - 1.0, 0.0)))))


def critical_gamma_thm2(n: int, m: int, p: float, eta: float) -> float:
    """Largest perturbation that keeps the sign-flip family eta-indistinguishable.

    (ln(1 + 4(1-eta)^2))^{1/4} sqrt(p / (m n)).
    """
    _check_rate_args(n, m, p, eta)
    return math.log(1.0 + 4.0 * (1.0 - eta) ** 2) ** 0.25 * math.sqrt(p / (m * n))


def critical_gamma_thm5(n: int, m: int, p: float, eta: float) -> float:
    """Two-block analogue: min(sqrt(ln(1+4(1-eta)^2)), 1/sqrt(32)) sqrt(p/(mn))."""
    _check_rate_args(n, m, p, eta)
    cap = min(math.sqrt(math.log(1.0 + 4.0 * (1.0 - eta) ** 2)), 1.0 / math.sqrt(32.0))
    return cap * math.sqrt(p / (m * n))


def _check_rate_args(n: int, m: int, p: float, eta: float) -> None:
    if n < 1 or m < 1:
        raise DomainError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    if not 0.0 < p <= 1.0:
        raise DomainError(f"p must lie in (0, 1], got {p!r}")
    if not 0.0 < eta < 1.0:
        raise DomainError(f"eta must lie in (0, 1), got {eta!r}")


def _edge_prob_bits(pair: ModelPair, m: int) -> np.ndarray:
    """Per-bit edge probabilities for one pair: m slots of P then m of Q."""
    iu = np.triu_indices(pair.n, 1)
    p_edges = pair.P.entries[iu]
    q_edges = pair.Q.entries[iu]
    return np.concatenate([np.tile(p_edges, m), np.tile(q_edges, m)])


def brute_force_chi_square(
    theta0: ModelPair, alt_family: Sequence[ModelPair], m: int
) -> float:
    """Exact chi-square quantity by enumerating every possible outcome.

    Sums, over all tuples of 2m graphs, the squared average alternative
    probability divided by the null probability.  Deliberately dumb: an
    independent check for any closed form or bound, never sharing code
    with them.  Outcomes with zero null probability are skipped when the
    alternative average also vanishes and reported as DivergentChiSquare
    otherwise.  Probabilities are accumulated in log space and
    exponentiated per term.
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    alts = list(alt_family)
    if not alts:
        raise DomainError("alt_family must be nonempty")
    n = theta0.n
    if any(alt.n != n for alt in alts):
        raise DomainError("all alternatives must share n with theta0")
    k = n * (n - 1) // 2
    bits_total = 2 * m * k
    if bits_total > ENUMERATION_BIT_CAP:
        raise TooLargeToEnumerate(
            f"enumeration needs 2^{bits_total} outcomes; cap is 2^{ENUMERATION_BIT_CAP}"
        )

    with np.errstate(divide="ignore"):
        null_log_on = np.log(_edge_prob_bits(theta0, m))
        null_log_off = np.log(1.0 - _edge_prob_bits(theta0, m))
        alt_log_on = np.stack([np.log(_edge_prob_bits(alt, m)) for alt in alts])
        alt_log_off = np.stack([np.log(1.0 - _edge_prob_bits(alt, m)) for alt in alts])

    log_family = math.log(len(alts))
    shifts = np.arange(bits_total, dtype=np.uint64)
    total = 0.0
    for start in range(0, 2**bits_total, _CHUNK):
        stop = min(start + _CHUNK, 2**bits_total)
        idx = np.arange(start, stop, dtype=np.uint64)
        bits = ((idx[:, None] >> shifts[None, :]) & 1).astype(bool)

        log_null = np.where(bits, null_log_on, null_log_off).sum(axis=1)
        log_alt = np.stack(
            [
                np.where(bits, alt_log_on[f], alt_log_off[f]).sum(axis=1)
                for f in range(len(alts))
            ]
        )
        # log of the family average, robust to -inf columns.
        peak = log_alt.max(axis=0)
        finite = peak > -np.inf
        log_mean = np.full(peak.shape, -np.inf)
        if finite.any():
            rel = np.exp(log_alt[:, finite] - peak[finite])
            log_mean[finite] = peak[finite] + np.log(rel.sum(axis=0)) - log_family

        null_zero = log_null == -np.inf
        if np.any(null_zero & (log_mean > -np.inf)):
            raise DivergentChiSquare(
                "an outcome has zero null probability but positive "
                "alternative probability"
            )
        keep = ~null_zero & (log_mean > -np.inf)
        total += float(np.exp(2.0 * log_mean[keep] - log_null[keep]).sum())
    return total
