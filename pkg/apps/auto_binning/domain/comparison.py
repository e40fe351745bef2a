from dataclasses import dataclass
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

BaselineMethod = Literal["raw-logistic", "equal-width", "equal-frequency"]


class BaselineSpec(BaseModel):
    """A baseline binner: raw logistic regression, or an unsupervised grid of `nbins` bins (the run's nbins when None)."""
    model_config = ConfigDict(frozen=True)

    method : BaselineMethod
    nbins : int | None = Field(default = None, ge = 2, description = "Grid size for binned methods")

    @property
    def label(self) -> str:
        return self.method


@dataclass(frozen=True)
class ComparisonRow:
    method: str
    fold_aucs: tuple[float, ...]
    kept_vars: int
    total_bins: int
    fold_digest: str

    @property
    def mean_auc(self) -> float:
        return float(np.mean(self.fold_aucs))

    @property
    def sd_auc(self) -> float:
        if len(self.fold_aucs) < 2:
            return 0.0
        return float(np.std(self.fold_aucs, ddof=1))


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]

    def row(self, method: str) -> ComparisonRow:
        for row in self.rows:
            if row.method == method:
                return row
        raise KeyError(method)

    def to_frame(self) -> pd.DataFrame:
        """Comparison report with columns method, mean_auc, sd_auc, kept_vars, total_bins."""
        return pd.DataFrame(
            {
                "method": [row.method for row in self.rows],
                "mean_auc": [row.mean_auc for row in self.rows],
                "sd_auc": [row.sd_auc for row in self.rows],
                "kept_vars": [row.kept_vars for row in self.rows],
                "total_bins": [row.total_bins for row in self.rows],
            }
        )
