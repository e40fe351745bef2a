from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger

from apps.auto_binning.domain import DataError, Dataset

LINE_TERMINATOR = "\n"


def _read_raw(path: Path) -> pd.DataFrame:
    """Read every cell as text so parse failures can be reported by row and column."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"input file not found: '{path}'")

    try:
        frame = pd.read_csv(path, sep=",", dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise DataError(f"empty dataset: '{path}' holds no header or rows") from None
    except pd.errors.ParserError as error:
        raise DataError(f"malformed CSV '{path}': {error}") from None

    return frame


def _parse_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    """Parse one text column into floats, naming the first bad cell on failure."""
    if column not in frame.columns:
        raise DataError(f"missing variable '{column}'")

    text = frame[column].str.strip()

    blank = (text == "").to_numpy()
    if blank.any():
        row = int(np.flatnonzero(blank)[0])
        raise DataError(f"missing value at row {row + 1}, column '{column}'")

    # correctly rounded conversion; pandas' fast parser can be off in the last bit
    try:
        values = text.to_numpy(dtype=object).astype(np.float64)
    except ValueError:
        unparsed = pd.to_numeric(text, errors="coerce").isna().to_numpy()
        row = int(np.flatnonzero(unparsed)[0]) if unparsed.any() else 0
        raise DataError(f"unparsable value '{frame[column].iloc[row]}' at row {row + 1}, column '{column}'") from None

    bad = ~np.isfinite(values)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise DataError(f"unparsable value '{frame[column].iloc[row]}' at row {row + 1}, column '{column}'")
    return values


def load_csv(path: Path, target_column: str, schema: list[str] | tuple[str, ...] | None = None) -> Dataset:
    """
    Read a comma-separated file with a header row into a Dataset.

    Feature columns keep their file order, minus the target; `schema`
    restricts them to a subset, in the order given.

    Args:
        path: CSV file.
        target_column: Name of the 0/1 target column.
        schema: Optional feature columns to keep.

    Returns:
        Dataset: Parsed features and target.

    Raises:
        FileNotFoundError: If the file does not exist.
        DataError: On an unparsable cell, a missing value, a non-binary target or an empty dataset.
    """
    frame = _read_raw(path)
    if target_column not in frame.columns:
        raise DataError(f"target column '{target_column}' not found in '{path}'")

    names = tuple(schema) if schema is not None else tuple(column for column in frame.columns if column != target_column)
    if frame.shape[0] == 0 or not names:
        raise DataError(f"empty dataset: '{path}' has {frame.shape[0]} rows and {len(names)} feature columns")

    target = _parse_column(frame, target_column)
    if not np.all((target == 0.0) | (target == 1.0)):
        row = int(np.flatnonzero((target != 0.0) & (target != 1.0))[0])
        raise DataError(f"target not binary: value {target[row]:g} at row {row + 1}, column '{target_column}'")

    features = np.column_stack([_parse_column(frame, name) for name in names])
    logger.info(f"Loaded {features.shape[0]} rows x {features.shape[1]} features from {path}")
    return Dataset(features=features, target=target, names=names)


def load_features(path: Path, columns: list[str] | tuple[str, ...]) -> np.ndarray:
    """
    Read only the named feature columns of a CSV, as an n x len(columns) matrix.

    Raises:
        FileNotFoundError: If the file does not exist.
        DataError: If a column is missing or a cell does not parse.
    """
    frame = _read_raw(path)
    if frame.shape[0] == 0:
        raise DataError(f"empty dataset: '{path}' has no rows")

    if not columns:
        return np.empty((frame.shape[0], 0))
    features = np.column_stack([_parse_column(frame, name) for name in columns])
    logger.info(f"Loaded {features.shape[0]} rows for {len(columns)} model variables from {path}")
    return features


def write_frame(frame: pd.DataFrame, path: Path) -> Path:
    """Write a report as CSV: header row, comma delimiter, shortest round-trip float text."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator=LINE_TERMINATOR)
    logger.debug(f"Wrote {len(frame)} rows to {path}")
    return path


def write_dataset(data: Dataset, path: Path, target_column: str = "y") -> Path:
    """Write a Dataset in the CSV layout `load_csv` reads, target last."""
    frame = pd.DataFrame(data.features, columns=list(data.names))
    frame[target_column] = data.target.astype(np.int64)
    return write_frame(frame, path)


def write_scores(scores: np.ndarray, path: Path) -> Path:
    """Write one probability per row under the column "score"."""
    return write_frame(pd.DataFrame({"score": np.asarray(scores, dtype=np.float64)}), path)
