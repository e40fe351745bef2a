from dataclasses import dataclass

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from apps.auto_binning.domain.coefficients import FitResult

DEFAULT_LAMBDA1_MULTIPLIERS = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0)


class PathConfig(BaseModel):
    """
    Regularization grid and cross-validation settings.

    The lambda2 grid holds `lambda2_count` log-spaced values from lambda2_max
    down to `lambda2_ratio * lambda2_max`; every lambda1 multiplier mu gives a
    strand with lambda1 = mu * lambda2.
    """
    model_config = ConfigDict(frozen=True)

    lambda2_count : int = Field(default = 20, ge = 1)
    lambda2_ratio : float = Field(default = 1e-3, gt = 0.0, lt = 1.0)
    lambda1_multipliers : tuple[float, ...] = Field(default = DEFAULT_LAMBDA1_MULTIPLIERS, min_length = 1)
    folds : int = Field(default = 5, ge = 2)
    seed : int = 0
    tol : float = Field(default = 1e-6, ge = 0.0, description = "Merge tolerance used to count kept variables and bins")
    one_standard_error : bool = Field(default = True, description = "Prefer sparser models within one SE of the best AUC")

    @field_validator("lambda1_multipliers")
    @classmethod
    def _nonnegative(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if any(multiplier < 0 for multiplier in value):
            raise ValueError("lambda1 multipliers must be nonnegative")
        return value


@dataclass(frozen=True)
class PathPoint:
    """One (lambda1, lambda2) grid point with its cross-validated metrics and full-data fit."""
    lambda1: float
    lambda2: float
    fold_aucs: tuple[float, ...]
    kept_vars: int
    total_bins: int
    fit: FitResult

    @property
    def mean_auc(self) -> float:
        return float(np.mean(self.fold_aucs))

    @property
    def sd_auc(self) -> float:
        if len(self.fold_aucs) < 2:
            return 0.0
        return float(np.std(self.fold_aucs, ddof=1))


@dataclass(frozen=True)
class PathResult:
    """All grid points in strand order, the selected point, the fold assignment and the full-data refit."""
    points: tuple[PathPoint, ...]
    selected_index: int
    folds: np.ndarray
    lambda2_max: float
    final_fit: FitResult

    @property
    def selected(self) -> PathPoint:
        return self.points[self.selected_index]

    def to_frame(self) -> pd.DataFrame:
        """Path report with columns lambda1, lambda2, mean_auc, sd_auc, kept_vars, total_bins, selected."""
        return pd.DataFrame(
            {
                "lambda1": [point.lambda1 for point in self.points],
                "lambda2": [point.lambda2 for point in self.points],
                "mean_auc": [point.mean_auc for point in self.points],
                "sd_auc": [point.sd_auc for point in self.points],
                "kept_vars": [point.kept_vars for point in self.points],
                "total_bins": [point.total_bins for point in self.points],
                "selected": [int(index == self.selected_index) for index in range(len(self.points))],
            }
        )
