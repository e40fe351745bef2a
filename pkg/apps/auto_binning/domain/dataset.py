import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import sparse

from apps.auto_binning.domain.exceptions import DataError


@dataclass(frozen=True)
class Dataset:
    """
    Column-major table of continuous features plus a binary target.

    Attributes:
        features: n x p matrix of finite reals
        target: length-n vector with entries exactly 0.0 or 1.0
        names: the p column labels, in file order
    """
    features: np.ndarray
    target: np.ndarray
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        features = np.asfortranarray(self.features, dtype=np.float64)
        target = np.asarray(self.target, dtype=np.float64)

        if features.ndim != 2 or features.shape[0] < 1 or features.shape[1] < 1:
            raise DataError("empty dataset: need at least one row and one feature column")
        if target.shape != (features.shape[0],):
            raise DataError(
                f"target has {target.shape[0] if target.ndim else 0} entries, expected {features.shape[0]}"
            )
        if len(self.names) != features.shape[1]:
            raise DataError(f"{len(self.names)} names given for {features.shape[1]} feature columns")
        if len(set(self.names)) != len(self.names):
            raise DataError("feature names must be unique")
        if not np.all(np.isfinite(features)):
            row, column = np.argwhere(~np.isfinite(features))[0]
            raise DataError(f"missing or non-finite value at row {row + 1}, column '{self.names[column]}'")
        if not np.all((target == 0.0) | (target == 1.0)):
            raise DataError("target not binary: entries must be 0 or 1")

        features.setflags(write=False)
        target.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "names", tuple(self.names))

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def index_of(self, name: str) -> int:
        """Position of a named column, raising DataError when absent."""
        try:
            return self.names.index(name)
        except ValueError:
            raise DataError(f"missing variable '{name}'") from None

    def select(self, names: list[str] | tuple[str, ...]) -> "Dataset":
        """Dataset restricted to the given columns, in the given order."""
        indices = [self.index_of(name) for name in names]
        return Dataset(features=self.features[:, indices], target=self.target, names=tuple(names))

    def take(self, rows: np.ndarray) -> "Dataset":
        """Dataset restricted to the given rows."""
        return Dataset(features=self.features[rows], target=self.target[rows], names=self.names)


class BinGrid(BaseModel):
    """
    Per-variable ordered cut points defining left-closed right-open bins.

    Variable j with cut points c_1 < ... < c_{m-1} has m bins
    (-inf, c_1), [c_1, c_2), ..., [c_{m-1}, +inf). Serialises to
    {"nbins": N, "cutpoints": {name: [c_1, ...]}}.
    """
    model_config = ConfigDict(frozen=True)

    nbins : int = Field(ge = 1, description = "Requested grid size")
    cutpoints : dict[str, tuple[float, ...]] = Field(
        description = "Interior cut points per variable, strictly increasing"
    )

    @field_validator("cutpoints")
    @classmethod
    def _strictly_increasing(cls, value: dict[str, tuple[float, ...]]) -> dict[str, tuple[float, ...]]:
        for name, cuts in value.items():
            if not all(math.isfinite(cut) for cut in cuts):
                raise ValueError(f"cut points of '{name}' must be finite")
            if any(left >= right for left, right in zip(cuts, cuts[1:])):
                raise ValueError(f"cut points of '{name}' must be strictly increasing")
        return value

    @model_validator(mode="after")
    def _within_grid_size(self) -> "BinGrid":
        for name, cuts in self.cutpoints.items():
            if len(cuts) + 1 > self.nbins:
                raise ValueError(f"'{name}' has {len(cuts) + 1} bins, more than nbins={self.nbins}")
        return self

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.cutpoints)

    @property
    def group_sizes(self) -> tuple[int, ...]:
        """Number of bins m_j per variable."""
        return tuple(len(cuts) + 1 for cuts in self.cutpoints.values())

    @property
    def total_bins(self) -> int:
        return sum(self.group_sizes)

    def cuts(self, j: int) -> np.ndarray:
        return np.asarray(self.cutpoints[self.names[j]], dtype=np.float64)

    @classmethod
    def from_file(cls, file_path: Path) -> "BinGrid":
        """
        Create a BinGrid from a JSON file.

        Args:
            file_path: Path to the JSON file written by `save`.

        Returns:
            BinGrid: The deserialised grid.
        """
        return cls.model_validate_json(Path(file_path).read_text(encoding="utf-8"))

    def save(self, output_path: Path) -> Path:
        """Write the grid as JSON and return the path written."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        return output_path


@dataclass(frozen=True)
class EncodedDesign:
    """
    Sparse indicator expansion of a dataset over a BinGrid.

    Attributes:
        matrix: n x sum(m_j) CSR indicator matrix, one nonzero per variable per row
        codes: n x p integer matrix, the 0-based bin index of every cell
        group_sizes: m_j per variable
        names: variable names, in group order
    """
    matrix: sparse.csr_matrix
    codes: np.ndarray
    group_sizes: tuple[int, ...]
    names: tuple[str, ...]

    @property
    def n_rows(self) -> int:
        return self.codes.shape[0]

    @property
    def n_groups(self) -> int:
        return len(self.group_sizes)

    @property
    def offsets(self) -> np.ndarray:
        """Start column of each group, followed by the total column count."""
        return np.concatenate(([0], np.cumsum(self.group_sizes))).astype(np.int64)

    @property
    def total_columns(self) -> int:
        return int(sum(self.group_sizes))

    @property
    def columns(self) -> list[tuple[int, int]]:
        """(variable j, bin k) identity of every column."""
        return [(j, k) for j, size in enumerate(self.group_sizes) for k in range(size)]

    @property
    def flat_codes(self) -> np.ndarray:
        """Column index of the single active indicator per row and variable."""
        return self.codes + self.offsets[:-1]

    def column_counts(self) -> np.ndarray:
        """Number of rows falling into every column."""
        return np.bincount(self.flat_codes.ravel(), minlength=self.total_columns)

    def take(self, rows: np.ndarray) -> "EncodedDesign":
        """Design restricted to the given rows."""
        rows = np.asarray(rows)
        return EncodedDesign(
            matrix=self.matrix[rows],
            codes=self.codes[rows],
            group_sizes=self.group_sizes,
            names=self.names,
        )
