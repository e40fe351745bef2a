from pathlib import Path

import numpy as np
from loguru import logger
from pydantic import ValidationError
from scipy.special import expit

from apps.auto_binning.application.model import score_dataset
from apps.auto_binning.domain import BinningModel, DataError, Dataset
from apps.auto_binning.infrastructure import ArtifactSet, load_features, write_scores

SCORES_FILE = "scores.csv"


def load_model(model_path: Path) -> BinningModel:
    """Read a model JSON, turning schema violations into DataError."""
    model_path = Path(model_path)
    if not model_path.is_file():
        raise FileNotFoundError(f"model file not found: '{model_path}'")
    try:
        return BinningModel.from_file(model_path)
    except ValidationError as error:
        raise DataError(f"invalid model file '{model_path}': {error.errors()[0]['msg']}") from None


def predict(model_path: Path, input_path: Path, output_path: Path) -> np.ndarray:
    """
    Pipeline to score a CSV with a saved model.

    Only the model's kept variables are read; dropped variables and any
    target column may be present or absent. When `output_path` is a
    directory the scores go to `scores.csv` inside it.

    Args:
        model_path: Model JSON written by the fit pipeline.
        input_path: CSV holding the kept variables.
        output_path: Scores CSV file or directory.

    Returns:
        np.ndarray: One probability per input row.
    """
    model = load_model(model_path)
    features = load_features(input_path, model.kept)

    if model.variables:
        # scoring reads no target, a zero column only satisfies the Dataset contract
        data = Dataset(features=features, target=np.zeros(features.shape[0]), names=model.kept)
        scores = score_dataset(model, data)
    else:
        scores = np.full(features.shape[0], float(expit(model.intercept)))

    output_path = Path(output_path)
    if output_path.is_dir():
        output_path = output_path / SCORES_FILE
    with ArtifactSet(output_path.parent) as artifacts:
        write_scores(scores, artifacts.path(output_path.name))

    logger.info(f"Scored {scores.size} rows into {output_path}")
    return scores
