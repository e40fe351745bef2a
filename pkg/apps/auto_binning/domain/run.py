from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from apps.auto_binning.domain.coefficients import GroupWeightRule, SolverConfig
from apps.auto_binning.domain.comparison import BaselineSpec
from apps.auto_binning.domain.exceptions import config_error_from
from apps.auto_binning.domain.path import DEFAULT_LAMBDA1_MULTIPLIERS, PathConfig
from apps.auto_binning.settings import settings

Prebinning = Literal["quantile", "uniform"]


class RunConfig(BaseModel):
    """
    Everything one batch run needs, validated before any work starts.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    input : Path | None = Field(default = None, description = "Training CSV")
    target : str = Field(default = "y", description = "Name of the binary target column")
    nbins : int = Field(default = 20, ge = 2, description = "Fine grid size")
    prebinning : Prebinning = Field(default = "quantile", description = "Fine grid rule")
    group_weights : GroupWeightRule = Field(default = "sqrt_size", description = "Group weight rule")
    lambda2_count : int = Field(default = 20, ge = 1)
    lambda2_ratio : float = Field(default = 1e-3, gt = 0.0, lt = 1.0)
    lambda1_multipliers : tuple[float, ...] = Field(default = DEFAULT_LAMBDA1_MULTIPLIERS, min_length = 1)
    folds : int = Field(default = 5, ge = 2)
    seed : int = 0
    tol : float = Field(default = 1e-6, ge = 0.0, description = "Merge tolerance")
    out : Path = Field(default = Path(settings.OUTPUT_DIR), description = "Output directory")
    refit_merged : bool = False
    solver : SolverConfig = Field(default_factory = SolverConfig)
    baselines : tuple[BaselineSpec, ...] = Field(
        default = (
            BaselineSpec(method="raw-logistic"),
            BaselineSpec(method="equal-width"),
            BaselineSpec(method="equal-frequency"),
        )
    )

    @classmethod
    def build(cls, values: dict) -> "RunConfig":
        """Validate raw values, converting pydantic errors into ConfigError."""
        try:
            return cls.model_validate(values)
        except ValidationError as error:
            raise config_error_from(error) from None

    def path_config(self) -> PathConfig:
        return PathConfig(
            lambda2_count=self.lambda2_count,
            lambda2_ratio=self.lambda2_ratio,
            lambda1_multipliers=self.lambda1_multipliers,
            folds=self.folds,
            seed=self.seed,
            tol=self.tol,
        )

    def resolved_baselines(self) -> tuple[BaselineSpec, ...]:
        """Baselines with an unset grid size taking the run's nbins."""
        return tuple(
            spec if spec.nbins is not None or spec.method == "raw-logistic" else spec.model_copy(update={"nbins": self.nbins})
            for spec in self.baselines
        )
