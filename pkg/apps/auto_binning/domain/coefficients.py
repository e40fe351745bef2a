import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

GroupWeightRule = Literal["sqrt_size", "unit"]


@dataclass(frozen=True)
class Coefficients:
    """
    Intercept plus one coefficient vector per variable group.

    Attributes:
        intercept: unpenalized beta_0
        groups: beta_j vectors, one per variable, of lengths m_j
    """
    intercept: float
    groups: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        groups = []
        for group in self.groups:
            group = np.array(group, dtype=np.float64)
            group.setflags(write=False)
            groups.append(group)
        object.__setattr__(self, "intercept", float(self.intercept))
        object.__setattr__(self, "groups", tuple(groups))

    @classmethod
    def zeros(cls, group_sizes: tuple[int, ...], intercept: float = 0.0) -> "Coefficients":
        return cls(intercept=intercept, groups=tuple(np.zeros(size) for size in group_sizes))

    @classmethod
    def from_flat(cls, intercept: float, flat: np.ndarray, group_sizes: tuple[int, ...]) -> "Coefficients":
        """Split a concatenated coefficient vector back into groups."""
        bounds = np.cumsum(group_sizes)[:-1]
        return cls(intercept=intercept, groups=tuple(np.split(np.asarray(flat, dtype=np.float64), bounds)))

    @property
    def group_sizes(self) -> tuple[int, ...]:
        return tuple(group.size for group in self.groups)

    def flat(self) -> np.ndarray:
        """All group coefficients concatenated in group order."""
        if not self.groups:
            return np.zeros(0)
        return np.concatenate(self.groups)


class PenaltyParams(BaseModel):
    """
    Weights of the fused (total variation) and group penalties.

    The penalty is lambda1 * sum_j TV(beta_j) + lambda2 * sum_j w_j * ||beta_j||_2.
    """
    model_config = ConfigDict(frozen=True)

    lambda1 : float = Field(ge = 0.0, description = "Fused / total-variation weight")
    lambda2 : float = Field(ge = 0.0, description = "Group-lasso weight")
    group_weights : tuple[float, ...] = Field(
        default = (), description = "Per-group positive multipliers w_j applied to lambda2"
    )

    @field_validator("group_weights")
    @classmethod
    def _positive_weights(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not all(math.isfinite(weight) and weight > 0 for weight in value):
            raise ValueError("group weights must be finite and positive")
        return value

    @classmethod
    def for_groups(
        cls,
        lambda1: float,
        lambda2: float,
        group_sizes: tuple[int, ...],
        rule: GroupWeightRule = "sqrt_size",
    ) -> "PenaltyParams":
        """
        Build penalty parameters with weights derived from the group sizes.

        Args:
            lambda1: Fused penalty weight.
            lambda2: Group penalty weight.
            group_sizes: Number of bins per group.
            rule: "sqrt_size" gives w_j = sqrt(m_j), "unit" gives w_j = 1.

        Returns:
            PenaltyParams: Parameters matching the group structure.
        """
        return cls(lambda1=lambda1, lambda2=lambda2, group_weights=group_weights(group_sizes, rule))


def group_weights(group_sizes: tuple[int, ...], rule: GroupWeightRule = "sqrt_size") -> tuple[float, ...]:
    """Per-group penalty multipliers for the given weighting rule."""
    if rule == "unit":
        return tuple(1.0 for _ in group_sizes)
    return tuple(math.sqrt(size) for size in group_sizes)


class SolverConfig(BaseModel):
    """Settings of the accelerated proximal-gradient solver."""
    model_config = ConfigDict(frozen=True)

    max_iters : int = Field(default = 10000, gt = 0, description = "Iteration cap")
    rel_tol : float = Field(default = 1e-8, gt = 0.0, description = "Relative objective change tolerance")
    grad_tol : float = Field(
        default = 1e-6, gt = 0.0,
        description = "Gradient-mapping norm below which an iterate counts as stationary"
    )
    initial_step : float | None = Field(
        default = None, gt = 0.0,
        description = "Initial step size; None uses 4n / ||[1, X]||_F^2"
    )
    backtrack_factor : float = Field(default = 0.5, gt = 0.0, lt = 1.0, description = "Step shrink factor")
    restart : bool = Field(default = True, description = "Adaptive momentum restart on objective increase")
    canonical_order : bool = Field(
        default = True, description = "Sort rows canonically before fitting for row-order invariance"
    )


@dataclass(frozen=True)
class FitResult:
    """
    Outcome of one penalized fit.

    Attributes:
        beta: the fitted coefficients
        objective_trace: penalized objective after every accepted iteration, starting with the initial point
        iterations: iterations performed
        converged: True when the relative objective change fell below rel_tol with a gradient mapping
            below grad_tol, or when no proximal step from the iterate decreases the objective
        step: final step size
        backtracks: total step reductions
        restarts: momentum restarts triggered by an objective increase
        params: penalty parameters the fit was computed with
    """
    beta: Coefficients
    objective_trace: np.ndarray
    iterations: int
    converged: bool
    step: float
    params: PenaltyParams
    backtracks: int = 0
    restarts: int = 0
    bin_counts: np.ndarray | None = field(default=None, compare=False)

    @property
    def objective(self) -> float:
        return float(self.objective_trace[-1])
