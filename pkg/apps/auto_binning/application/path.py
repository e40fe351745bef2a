import math

import numpy as np
from joblib import Parallel, delayed
from loguru import logger
from sklearn.model_selection import StratifiedKFold
from tqdm import tqdm

from apps.auto_binning.application.model import auc, structure_counts
from apps.auto_binning.application.optimization import fit, nll_gradient, predict_logit
from apps.auto_binning.domain import (
    Coefficients,
    DataError,
    EncodedDesign,
    FitResult,
    PathConfig,
    PathPoint,
    PathResult,
    PenaltyParams,
    SolverConfig,
    group_weights,
)
from apps.auto_binning.settings import settings


def lambda2_max(design: EncodedDesign, target: np.ndarray, weights: tuple[float, ...]) -> float:
    """
    Smallest lambda2 at which, with lambda1 = 0, every group is exactly zero.

    Equals max_j ||grad_j nll(beta = 0, beta_0 = logit(mean(y)))||_2 / w_j.

    Raises:
        DataError: If the target holds a single class.
    """
    target = np.asarray(target, dtype=np.float64)
    mean = float(np.mean(target))
    if mean <= 0.0 or mean >= 1.0:
        raise DataError("degenerate target: lambda2_max needs both classes")

    start = Coefficients.zeros(design.group_sizes, intercept=math.log(mean / (1.0 - mean)))
    gradient = nll_gradient(design, target, start)
    return max(float(np.linalg.norm(group)) / weight for group, weight in zip(gradient.groups, weights))


def lambda2_grid(lambda_max: float, config: PathConfig) -> np.ndarray:
    """`lambda2_count` log-spaced values from lambda_max down to lambda2_ratio * lambda_max."""
    if config.lambda2_count == 1:
        return np.array([lambda_max])
    return lambda_max * np.logspace(0.0, math.log10(config.lambda2_ratio), config.lambda2_count)


def stratified_folds(target: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """
    Fold id per row, stratified by target so every fold holds both classes.

    Raises:
        DataError: If a class has fewer rows than there are folds.
    """
    target = np.asarray(target)
    smallest = int(min(np.sum(target == 1.0), np.sum(target == 0.0)))
    if smallest < folds:
        raise DataError(f"cannot build {folds} stratified folds: the rarest class has {smallest} rows")

    assignment = np.empty(target.size, dtype=np.int64)
    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    for fold, (_, test_rows) in enumerate(splitter.split(np.zeros(target.size), target)):
        assignment[test_rows] = fold
    return assignment


def single_class_fold(target: np.ndarray, folds: np.ndarray) -> int | None:
    """First fold whose held-out rows hold a single class, or None."""
    target = np.asarray(target)
    for fold in np.unique(folds):
        if np.unique(target[folds == fold]).size < 2:
            return int(fold)
    return None


def fit_strand(
    design: EncodedDesign,
    target: np.ndarray,
    lambdas2: np.ndarray,
    multiplier: float,
    weights: tuple[float, ...],
    config: SolverConfig | None = None,
) -> list[FitResult]:
    """
    Fits along decreasing lambda2 with lambda1 = multiplier * lambda2, each warm-started from the previous.
    """
    fits, warm_start = [], None
    for lambda2 in lambdas2:
        params = PenaltyParams(lambda1=multiplier * lambda2, lambda2=lambda2, group_weights=weights)
        result = fit(design, target, params, config, warm_start=warm_start)
        fits.append(result)
        warm_start = result.beta
    return fits


def fit_fold_strand(
    design: EncodedDesign,
    target: np.ndarray,
    folds: np.ndarray,
    fold: int,
    lambdas2: np.ndarray,
    multiplier: float,
    weights: tuple[float, ...],
    config: SolverConfig | None = None,
) -> list[FitResult]:
    """Strand fitted on the rows outside `fold` only."""
    train_rows = np.flatnonzero(folds != fold)
    return fit_strand(design.take(train_rows), np.asarray(target)[train_rows], lambdas2, multiplier, weights, config)


def _fold_aucs(
    design: EncodedDesign,
    target: np.ndarray,
    folds: np.ndarray,
    fold: int,
    lambdas2: np.ndarray,
    multiplier: float,
    weights: tuple[float, ...],
    config: SolverConfig | None,
) -> list[float]:
    held_out = np.flatnonzero(folds == fold)
    held_out_design = design.take(held_out)
    held_out_target = np.asarray(target)[held_out]

    fits = fit_fold_strand(design, target, folds, fold, lambdas2, multiplier, weights, config)
    return [auc(predict_logit(held_out_design, result.beta), held_out_target) for result in fits]


def select_point(points: list[PathPoint], folds: int, one_standard_error: bool = True) -> int:
    """
    Index of the selected grid point.

    Candidates are the points whose mean AUC reaches the best mean AUC minus
    one standard error of the best point (or equals the best without the
    rule); among them the fewest kept variables win, then the fewest bins,
    then the higher mean AUC, then grid order.
    """
    means = [point.mean_auc for point in points]
    best = int(np.argmax(means))
    threshold = means[best]
    if one_standard_error:
        threshold -= points[best].sd_auc / math.sqrt(folds)

    candidates = [index for index, mean in enumerate(means) if mean >= threshold]
    return min(
        candidates,
        key=lambda index: (points[index].kept_vars, points[index].total_bins, -means[index], index),
    )


def trace(
    design: EncodedDesign,
    target: np.ndarray,
    config: PathConfig | None = None,
    solver_config: SolverConfig | None = None,
    weights: tuple[float, ...] | None = None,
    folds: np.ndarray | None = None,
) -> PathResult:
    """
    Walk the (lambda1, lambda2) grid with warm starts, cross-validate every point, select one.

    Within each lambda1 multiplier the lambda2 grid runs from largest to
    smallest; the full-data strand provides kept-variable and bin counts,
    and k fold strands (fitted on the training rows of their fold) score
    the held-out rows for the AUC. The selected point is refit on all rows.

    Args:
        design: Encoded design over all rows.
        target: 0/1 target per row.
        config: Grid and cross-validation settings.
        solver_config: Solver settings for every fit.
        weights: Group weights; sqrt(m_j) when None.
        folds: Fold id per row; stratified folds from config.folds and config.seed when None,
            or when a given fold holds a single class.

    Returns:
        PathResult: Metrics per grid point, the selection and the final fit.
    """
    config = config or PathConfig()
    target = np.asarray(target, dtype=np.float64)
    weights = weights or group_weights(design.group_sizes)

    lambda_max = lambda2_max(design, target, weights)
    if lambda_max <= 0.0:
        logger.warning("All group gradients vanish at the null model, the lambda2 grid collapses to 0")
    lambdas2 = lambda2_grid(lambda_max, config)
    if folds is None:
        folds = stratified_folds(target, config.folds, config.seed)
    elif np.unique(folds).size != config.folds:
        raise DataError(f"fold vector holds {np.unique(folds).size} folds, config expects {config.folds}")
    elif (fold := single_class_fold(target, folds)) is not None:
        logger.warning(f"Fold {fold} holds a single class, folds re-stratified with seed {config.seed}")
        folds = stratified_folds(target, config.folds, config.seed)

    logger.info(
        f"Tracing path: lambda2_max={lambda_max:.6g}, {len(lambdas2)} lambda2 values x "
        f"{len(config.lambda1_multipliers)} lambda1 multipliers, {config.folds} folds"
    )

    points: list[PathPoint] = []
    multipliers = tqdm(config.lambda1_multipliers, desc="Path strands", unit="strand", disable=not settings.PROGRESS)
    for multiplier in multipliers:
        full_fits = fit_strand(design, target, lambdas2, multiplier, weights, solver_config)
        fold_aucs = Parallel(n_jobs=settings.N_JOBS)(
            delayed(_fold_aucs)(design, target, folds, fold, lambdas2, multiplier, weights, solver_config)
            for fold in range(config.folds)
        )

        for index, (lambda2, result) in enumerate(zip(lambdas2, full_fits)):
            kept_vars, total_bins = structure_counts(result, config.tol)
            points.append(
                PathPoint(
                    lambda1=float(multiplier * lambda2),
                    lambda2=float(lambda2),
                    fold_aucs=tuple(float(aucs[index]) for aucs in fold_aucs),
                    kept_vars=kept_vars,
                    total_bins=total_bins,
                    fit=result,
                )
            )
        logger.debug(f"Strand lambda1 = {multiplier} * lambda2 done")

    selected_index = select_point(points, config.folds, config.one_standard_error)
    selected = points[selected_index]
    final_fit = fit(design, target, selected.fit.params, solver_config, warm_start=selected.fit.beta)

    logger.info(
        f"Selected lambda1={selected.lambda1:.6g}, lambda2={selected.lambda2:.6g}: "
        f"mean AUC {selected.mean_auc:.4f} (sd {selected.sd_auc:.4f}), "
        f"{selected.kept_vars} kept variables, {selected.total_bins} bins"
    )

    return PathResult(
        points=tuple(points),
        selected_index=selected_index,
        folds=folds,
        lambda2_max=lambda_max,
        final_fit=final_fit,
    )
