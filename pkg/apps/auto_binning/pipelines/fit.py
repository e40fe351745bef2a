from dataclasses import dataclass
from pathlib import Path

from loguru import logger

from apps.auto_binning.application.binning import encode, prebin
from apps.auto_binning.application.model import auc, extract, refit_merged, score_dataset, scorecard
from apps.auto_binning.application.path import trace
from apps.auto_binning.domain import BinningModel, ConfigError, PathResult, RunConfig, group_weights
from apps.auto_binning.infrastructure import ArtifactSet, load_csv, write_frame

MODEL_FILE = "model.json"
GRID_FILE = "grid.json"
SCORECARD_FILE = "scorecard.csv"
PATH_FILE = "path.csv"


@dataclass(frozen=True)
class FitOutcome:
    model: BinningModel
    path: PathResult
    artifacts: tuple[Path, ...]


def fit(config: RunConfig) -> FitOutcome:
    """
    Pipeline to fit an automatic binning model and write its artifacts.

    Runs load -> fine grid -> encode -> path trace -> extract (-> merged
    refit) -> scorecard, then writes model.json, grid.json, scorecard.csv and
    path.csv to `config.out`. Nothing is left behind when a stage fails.

    Args:
        config: Validated run configuration.

    Returns:
        FitOutcome: The model, the path result and the written files.
    """
    if config.input is None:
        raise ConfigError("invalid input: an input CSV is required")

    data = load_csv(config.input, config.target)
    grid = prebin(data, config.nbins, config.prebinning)
    design = encode(data, grid)
    logger.info(f"Fine grid ({config.prebinning}): {grid.total_bins} bins over {len(grid.names)} variables")

    path = trace(
        design,
        data.target,
        config.path_config(),
        config.solver,
        weights=group_weights(design.group_sizes, config.group_weights),
    )
    model = extract(path.final_fit, grid, config.tol)
    if config.refit_merged:
        model = refit_merged(model, data, config.solver)

    train_auc = auc(score_dataset(model, data), data.target)
    model = model.model_copy(update={"provenance": model.provenance.model_copy(update={"train_auc": train_auc})})
    logger.info(f"Model keeps {len(model.variables)} of {data.n_features} variables, training AUC {train_auc:.4f}")

    with ArtifactSet(config.out) as artifacts:
        model.save(artifacts.path(MODEL_FILE))
        grid.save(artifacts.path(GRID_FILE))
        write_frame(scorecard(model, data).to_frame(), artifacts.path(SCORECARD_FILE))
        write_frame(path.to_frame(), artifacts.path(PATH_FILE))

    logger.info(f"Artifacts written to {config.out}")
    return FitOutcome(model=model, path=path, artifacts=tuple(artifacts.paths))
