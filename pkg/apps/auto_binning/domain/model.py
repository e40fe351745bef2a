from pathlib import Path

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator


class VariableBins(BaseModel):
    """Merged bins of one kept variable: m-1 cut points and m coefficients."""
    model_config = ConfigDict(frozen=True)

    name : str
    cutpoints : tuple[float, ...]
    coefficients : tuple[float, ...]

    @model_validator(mode="after")
    def _one_coefficient_per_bin(self) -> "VariableBins":
        if len(self.coefficients) != len(self.cutpoints) + 1:
            raise ValueError(
                f"'{self.name}' has {len(self.cutpoints)} cut points but {len(self.coefficients)} coefficients"
            )
        if any(left >= right for left, right in zip(self.cutpoints, self.cutpoints[1:])):
            raise ValueError(f"cut points of '{self.name}' must be strictly increasing")
        return self


class Provenance(BaseModel):
    """Settings a BinningModel was extracted under."""
    model_config = ConfigDict(frozen=True)

    nbins : int
    lambda1 : float
    lambda2 : float
    tol : float
    refit : bool = False
    train_auc : float | None = None


class BinningModel(BaseModel):
    """
    User-facing binned logistic model.

    Kept variables carry merged bins and coefficients; dropped variables
    contribute zero to every score. `features` lists every input variable
    in its original order so rows can be scored positionally.
    """
    model_config = ConfigDict(frozen=True)

    intercept : float
    variables : tuple[VariableBins, ...] = Field(default = ())
    dropped : tuple[str, ...] = Field(default = ())
    features : tuple[str, ...] = Field(default = ())
    provenance : Provenance

    @model_validator(mode="after")
    def _consistent_features(self) -> "BinningModel":
        known = {variable.name for variable in self.variables} | set(self.dropped)
        if self.features and set(self.features) != known:
            raise ValueError("features must list exactly the kept and dropped variables")
        return self

    @property
    def kept(self) -> tuple[str, ...]:
        return tuple(variable.name for variable in self.variables)

    @property
    def total_bins(self) -> int:
        """Number of merged bins over all kept variables."""
        return sum(len(variable.coefficients) for variable in self.variables)

    def variable(self, name: str) -> VariableBins:
        for variable in self.variables:
            if variable.name == name:
                return variable
        raise KeyError(name)

    @classmethod
    def from_file(cls, file_path: Path) -> "BinningModel":
        """
        Create a BinningModel from a JSON file.

        Args:
            file_path: Path to the JSON file written by `save`.

        Returns:
            BinningModel: The validated model.
        """
        return cls.model_validate_json(Path(file_path).read_text(encoding="utf-8"))

    def save(self, output_path: Path) -> Path:
        """Write the model as JSON and return the path written."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        return output_path


class ScorecardRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    variable : str
    bin_low : float
    bin_high : float
    coefficient : float
    count : int
    event_rate : float
    woe : float


class ScorecardTable(BaseModel):
    """Per variable and merged bin: coefficient, training count, event rate and WOE."""
    model_config = ConfigDict(frozen=True)

    rows : tuple[ScorecardRow, ...]

    def to_frame(self) -> pd.DataFrame:
        columns = list(ScorecardRow.model_fields)
        return pd.DataFrame([row.model_dump() for row in self.rows], columns=columns)
