from pathlib import Path

from loguru import logger

from apps.auto_binning.application.baselines import run_comparison
from apps.auto_binning.domain import ComparisonTable, ConfigError, RunConfig
from apps.auto_binning.infrastructure import ArtifactSet, load_csv, write_frame

COMPARISON_FILE = "comparison.csv"


def compare(config: RunConfig, include_abm: bool = True) -> tuple[ComparisonTable, Path]:
    """
    Pipeline to compare automatic binning with the configured baselines on shared folds.

    Args:
        config: Run configuration; `baselines` lists the methods, `folds` and `seed` fix the split.
        include_abm: Whether to add the automatic-binning row first.

    Returns:
        tuple[ComparisonTable, Path]: The table and the CSV it was written to.
    """
    if config.input is None:
        raise ConfigError("invalid input: an input CSV is required")

    data = load_csv(config.input, config.target)
    table = run_comparison(
        data,
        config.resolved_baselines(),
        config if include_abm else None,
        folds=config.folds,
        seed=config.seed,
    )

    with ArtifactSet(config.out) as artifacts:
        output_path = write_frame(table.to_frame(), artifacts.path(COMPARISON_FILE))

    for row in table.rows:
        logger.info(
            f"{row.method}: mean AUC {row.mean_auc:.4f} (sd {row.sd_auc:.4f}), "
            f"{row.kept_vars} variables, {row.total_bins} bins"
        )
    return table, output_path
