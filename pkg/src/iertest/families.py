"""Deterministic model-pair families for sweeps and power curves.

Each family builds a ModelPair from (n, m, param) where param is the
swept quantity; the registry maps the names accepted in sweep and
power-curve configuration files to constructors.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .model import ModelPair, ProbabilityMatrix, constant_model, symmetrized


def constant_pair(n: int, p: float, q: float) -> ModelPair:
    """P all-p against Q all-q (off-diagonal)."""
    return ModelPair(constant_model(n, p), constant_model(n, q))


def balanced_two_block_pair(n: int, p: float, gamma: float) -> ModelPair:
    """P all-p against a balanced two-block Q: p + gamma on the two
    n/2-blocks, p - gamma across.

    A deterministic member of the two-block lower-bound family (label
    vector = first half +1, second half -1).  Every row of P + Q sums to
    2p(n-1) - gamma, so separation_s2 = gamma (n-1) / sqrt(2p(n-1) - gamma)
    in closed form.
    """
    if n < 2 or n % 2 != 0:
        raise DomainError(f"balanced two-block family needs even n >= 2, got {n}")
    if not 0.0 < p <= 0.5:
        raise DomainError(f"p must lie in (0, 1/2], got {p!r}")
    if not 0.0 <= gamma <= min(p, 1.0 - p):
        raise DomainError(f"gamma must lie in [0, min(p, 1-p)], got {gamma!r}")
    v = np.ones(n)
    v[n // 2 :] = -1.0
    q = p + gamma * np.outer(v, v)
    np.fill_diagonal(q, 0.0)
    return ModelPair(constant_model(n, p), ProbabilityMatrix(symmetrized(q)))


def gamma_for_two_block_s2(n: int, p: float, s2: float) -> float:
    """Block contrast gamma that makes the balanced pair hit separation s2.

    Solves gamma^2 (n-1)^2 + s2^2 gamma - 2 p s2^2 (n-1) = 0 for the
    positive root; raises DomainError when the required gamma would push
    probabilities outside [0, 1].
    """
    if s2 < 0:
        raise DomainError(f"target separation must be nonnegative, got {s2!r}")
    if s2 == 0.0:
        return 0.0
    a = float(n - 1) ** 2
    b = s2 * s2
    c = -2.0 * p * s2 * s2 * (n - 1)
    gamma = (-b + math.sqrt(b * b - 4.0 * a * c)) / (2.0 * a)
    if gamma > min(p, 1.0 - p) + 1e-12:
        raise DomainError(
            f"separation {s2!r} needs gamma = {gamma:.6g}, beyond min(p, 1-p) = "
            f"{min(p, 1.0 - p):.6g}; enlarge n or p"
        )
    return min(gamma, min(p, 1.0 - p))


def two_block_pair_with_s2(n: int, p: float, s2: float) -> ModelPair:
    """Balanced two-block pair with separation_s2 equal to s2 exactly."""
    return balanced_two_block_pair(n, p, gamma_for_two_block_s2(n, p, s2))


def dense_vs_empty_pair(n: int, a: float) -> ModelPair:
    """P = a on every off-diagonal entry against the empty model.

    The maximal-separation direction: separation_s2 = sqrt(a (n-1)) and
    separation_s1 = sqrt(a) (n(n-1))^{1/4}.
    """
    return ModelPair(constant_model(n, a), constant_model(n, 0.0))


def _family_er_null(n: int, m: int, param: float, **kwargs) -> ModelPair:
    return constant_pair(n, param, param)


def _family_constant_shift(n: int, m: int, param: float, *, p: float = 0.3, **kwargs) -> ModelPair:
    return constant_pair(n, p, p + param)


def _family_two_block_s2(n: int, m: int, param: float, *, p: float = 0.3, **kwargs) -> ModelPair:
    return two_block_pair_with_s2(n, p, param)


def _family_two_block_s2_rate(
    n: int, m: int, param: float, *, p: float = 0.3, **kwargs
) -> ModelPair:
    # param is the constant c in s2 = c / sqrt(m): the scale-invariant sweep.
    return two_block_pair_with_s2(n, p, param / math.sqrt(m))


def _family_dense_vs_empty(n: int, m: int, param: float, **kwargs) -> ModelPair:
    return dense_vs_empty_pair(n, param)


FAMILIES = {
    "er_null": _family_er_null,
    "constant_shift": _family_constant_shift,
    "two_block_s2": _family_two_block_s2,
    "two_block_s2_rate": _family_two_block_s2_rate,
    "dense_vs_empty": _family_dense_vs_empty,
}


def build_pair(family: str, n: int, m: int, param: float, **kwargs) -> ModelPair:
    """Look up a family by name and build its pair for one grid cell."""
    try:
        ctor = FAMILIES[family]
    except KeyError:
        raise DomainError(
            f"unknown family {family!r}; known: {sorted(FAMILIES)}"
        ) from None
    return ctor(n, m, param, **kwargs)
