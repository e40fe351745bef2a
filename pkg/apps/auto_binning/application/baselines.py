import warnings

import numpy as np
from loguru import logger
from sklearn.exceptions import ConvergenceWarning
from sklearn.linear_model import LogisticRegression
from sklearn.pipeline import Pipeline
from sklearn.preprocessing import StandardScaler
from tqdm import tqdm

from apps.auto_binning.application.binning import encode, equal_width_grid, fit_grid, prebin
from apps.auto_binning.application.model import auc, structure_counts
from apps.auto_binning.application.path import stratified_folds, trace
from apps.auto_binning.domain import (
    BaselineSpec,
    BinGrid,
    ComparisonRow,
    ComparisonTable,
    ConfigError,
    Dataset,
    RunConfig,
    SolverConfig,
    group_weights,
)
from apps.auto_binning.settings import settings
from apps.auto_binning.utils import array_digest

BASELINE_RIDGE = 1e-8
ABM_LABEL = "abm"

__all__ = ["ABM_LABEL", "baseline_grid", "equal_width_grid", "evaluate_baseline", "evaluate_abm", "run_comparison"]


def baseline_grid(data: Dataset, spec: BaselineSpec) -> BinGrid:
    """Unsupervised grid of a binned baseline, built on all rows."""
    if spec.nbins is None:
        raise ConfigError(f"{spec.method} needs nbins")
    if spec.method == "equal-width":
        return equal_width_grid(data, spec.nbins)
    return fit_grid(data, spec.nbins)


def _logistic(n_train: int) -> LogisticRegression:
    # sklearn minimises 0.5 ||w||^2 + C * sum(loss); C = 1 / (n * ridge) matches mean loss + ridge / 2 ||w||^2
    return LogisticRegression(C=1.0 / (n_train * BASELINE_RIDGE), solver="lbfgs", max_iter=10000)


def evaluate_baseline(data: Dataset, spec: BaselineSpec, folds: np.ndarray) -> ComparisonRow:
    """
    Cross-validated AUC of an unpenalized logistic regression on a baseline encoding.

    Binned baselines fit on the one-hot design of their grid; the raw
    baseline fits on standardised raw features. Every fold model sees only
    its training rows, and the near-zero ridge only guards rank deficiency.

    Args:
        data: Dataset.
        spec: The baseline.
        folds: Fold id per row, shared with every other method.

    Returns:
        ComparisonRow: Fold AUCs, kept variables (all) and bin count.
    """
    if spec.method == "raw-logistic":
        features, total_bins = data.features, data.n_features
    else:
        grid = baseline_grid(data, spec)
        features, total_bins = encode(data, grid).matrix, grid.total_bins

    fold_aucs = []
    for fold in range(int(folds.max()) + 1):
        train, test = folds != fold, folds == fold
        model = _logistic(int(train.sum()))
        if spec.method == "raw-logistic":
            model = Pipeline([("scale", StandardScaler()), ("logistic", model)])

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            model.fit(features[train], data.target[train])
        fold_aucs.append(auc(model.decision_function(features[test]), data.target[test]))

    logger.debug(f"Baseline {spec.label}: mean AUC {np.mean(fold_aucs):.4f}, {total_bins} bins")
    return ComparisonRow(
        method=spec.label,
        fold_aucs=tuple(fold_aucs),
        kept_vars=data.n_features,
        total_bins=total_bins,
        fold_digest=array_digest(folds),
    )


def evaluate_abm(
    data: Dataset,
    config: RunConfig,
    folds: np.ndarray,
    solver_config: SolverConfig | None = None,
) -> ComparisonRow:
    """
    Automatic binning on the shared folds: fine grid, path trace, selected point.

    The fold AUCs are those of the selected grid point; kept variables and
    bins come from the full-data refit at that point.
    """
    grid = prebin(data, config.nbins, config.prebinning)
    design = encode(data, grid)
    path_config = config.path_config().model_copy(update={"folds": int(folds.max()) + 1})
    result = trace(
        design,
        data.target,
        path_config,
        solver_config or config.solver,
        weights=group_weights(design.group_sizes, config.group_weights),
        folds=folds,
    )
    kept_vars, total_bins = structure_counts(result.final_fit, config.tol)

    return ComparisonRow(
        method=ABM_LABEL,
        fold_aucs=result.selected.fold_aucs,
        kept_vars=kept_vars,
        total_bins=total_bins,
        fold_digest=array_digest(result.folds),
    )


def run_comparison(
    data: Dataset,
    methods: list[BaselineSpec] | tuple[BaselineSpec, ...],
    abm: RunConfig | None,
    folds: int,
    seed: int,
) -> ComparisonTable:
    """
    Compare automatic binning with baseline binners on identical stratified folds.

    Args:
        data: Dataset.
        methods: Baselines to evaluate.
        abm: Automatic-binning settings; the ABM row is skipped when None.
        folds: Number of folds.
        seed: Seed of the fold assignment.

    Returns:
        ComparisonTable: The ABM row first (when requested), then baselines in the given order.
    """
    assignment = stratified_folds(data.target, folds, seed)
    logger.info(f"Comparing {len(methods) + (abm is not None)} methods on {folds} shared folds (seed {seed})")

    rows = []
    if abm is not None:
        rows.append(evaluate_abm(data, abm, assignment))
    for spec in tqdm(methods, desc="Baselines", unit="method", disable=not settings.PROGRESS):
        rows.append(evaluate_baseline(data, spec, assignment))

    return ComparisonTable(rows=tuple(rows))
