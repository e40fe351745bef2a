import math

import numpy as np
from loguru import logger

from apps.auto_binning.application.optimization.objective import (
    BinnedLogisticLoss,
    nll,
    penalty_of_groups,
    penalty_value,
)
from apps.auto_binning.application.optimization.prox import prox_penalty
from apps.auto_binning.domain import (
    Coefficients,
    DataError,
    EncodedDesign,
    FitResult,
    PenaltyParams,
    SolverConfig,
    SolverError,
)

INTERCEPT_BOUND = 10.0


def objective_at(
    design: EncodedDesign,
    target: np.ndarray,
    beta: Coefficients,
    params: PenaltyParams,
) -> float:
    """Penalized objective nll + penalty_value at beta."""
    return nll(design, target, beta) + penalty_value(beta, params)


def canonical_row_order(design: EncodedDesign, target: np.ndarray) -> np.ndarray:
    """
    Row permutation sorting rows lexicographically by (bin codes, target).

    Rows that compare equal are interchangeable, so every reduction over the
    sorted rows is bitwise independent of the input row order.
    """
    keys = [np.asarray(target)] + [design.codes[:, j] for j in reversed(range(design.n_groups))]
    return np.lexsort(keys)


def initial_intercept(target: np.ndarray) -> float:
    """logit(mean(y)) clamped to [-10, 10]."""
    mean = float(np.mean(target))
    if mean <= 0.0:
        return -INTERCEPT_BOUND
    if mean >= 1.0:
        return INTERCEPT_BOUND
    return float(np.clip(math.log(mean / (1.0 - mean)), -INTERCEPT_BOUND, INTERCEPT_BOUND))


def fit(
    design: EncodedDesign,
    target: np.ndarray,
    params: PenaltyParams,
    config: SolverConfig | None = None,
    warm_start: Coefficients | None = None,
) -> FitResult:
    """
    Minimise nll + penalty with FISTA, backtracking and adaptive restart.

    Each iteration takes a gradient step at the extrapolated point, a plain
    step for the intercept and `prox_penalty` for the groups; the step
    shrinks until the smooth part satisfies the sufficient-decrease bound
    f(x+) <= f(y) + <grad f(y), x+ - y> + ||x+ - y||^2 / (2 step). With
    restart on, an iterate that would raise the objective is rejected and
    the momentum reset, so the recorded trace never increases.

    Args:
        design: Encoded training design.
        target: 0/1 target per row.
        params: Penalty weights, one group weight per design group.
        config: Solver settings; defaults when None.
        warm_start: Starting coefficients; beta = 0 with intercept logit(mean(y)) when None.

    Returns:
        FitResult: Final coefficients (groups are exact prox outputs) and diagnostics.

    Raises:
        DataError: If shapes of params, warm start and design disagree.
        SolverError: If the objective becomes non-finite.
    """
    config = config or SolverConfig()
    target = np.asarray(target, dtype=np.float64)

    if len(params.group_weights) != design.n_groups:
        raise DataError(f"{len(params.group_weights)} group weights given for {design.n_groups} groups")
    if warm_start is not None and warm_start.group_sizes != design.group_sizes:
        raise DataError(
            f"warm start groups {warm_start.group_sizes} do not match design groups {design.group_sizes}"
        )

    rows = canonical_row_order(design, target) if config.canonical_order else None
    loss = BinnedLogisticLoss(design, target, rows=rows)
    bounds = design.offsets[1:-1]

    def split(flat: np.ndarray) -> list[np.ndarray]:
        return np.split(flat, bounds)

    def penalized(intercept: float, flat: np.ndarray) -> tuple[float, float]:
        smooth = loss.value(intercept, flat)
        return smooth, smooth + penalty_of_groups(split(flat), params)

    if warm_start is None:
        x_intercept, x_flat = initial_intercept(loss.target), np.zeros(design.total_columns)
    else:
        x_intercept, x_flat = warm_start.intercept, warm_start.flat().copy()

    step = config.initial_step or 4.0 * loss.n_rows / (loss.n_rows * (loss.n_groups + 1))
    _, x_objective = penalized(x_intercept, x_flat)
    if not math.isfinite(x_objective):
        raise SolverError("non-finite objective at the starting point; check input scaling")

    trace = [x_objective]
    y_intercept, y_flat = x_intercept, x_flat
    momentum = 1.0
    at_iterate = True
    converged = False
    backtracks = restarts = iteration = 0

    for iteration in range(1, config.max_iters + 1):
        y_smooth, grad_intercept, grad_flat = loss.value_and_gradient(y_intercept, y_flat)
        if not math.isfinite(y_smooth):
            raise SolverError("non-finite objective encountered; check input scaling")

        while True:
            candidate_intercept = y_intercept - step * grad_intercept
            candidate_flat = np.concatenate(prox_penalty(split(y_flat - step * grad_flat), step, params))
            candidate_smooth = loss.value(candidate_intercept, candidate_flat)

            delta_intercept = candidate_intercept - y_intercept
            delta_flat = candidate_flat - y_flat
            bound = (
                y_smooth
                + grad_intercept * delta_intercept
                + float(grad_flat @ delta_flat)
                + (delta_intercept * delta_intercept + float(delta_flat @ delta_flat)) / (2.0 * step)
            )
            if candidate_smooth <= bound + 1e-12 * max(1.0, abs(y_smooth)):
                break
            step *= config.backtrack_factor
            backtracks += 1

        candidate_objective = candidate_smooth + penalty_of_groups(split(candidate_flat), params)
        if not math.isfinite(candidate_objective):
            raise SolverError("non-finite objective encountered; check input scaling")

        if config.restart and candidate_objective > x_objective:
            if at_iterate:
                # a plain proximal step from the iterate cannot decrease further
                converged = True
                break
            restarts += 1
            logger.debug(f"Momentum restart at iteration {iteration}")
            y_intercept, y_flat = x_intercept, x_flat
            momentum = 1.0
            at_iterate = True
            continue

        change = abs(x_objective - candidate_objective) / max(abs(x_objective), np.finfo(float).tiny)
        # gradient mapping at y: bounds the stationarity residual of the new iterate
        mapping = math.sqrt(delta_intercept * delta_intercept + float(delta_flat @ delta_flat)) / step
        next_momentum = (1.0 + math.sqrt(1.0 + 4.0 * momentum * momentum)) / 2.0
        extrapolation = (momentum - 1.0) / next_momentum

        y_intercept = candidate_intercept + extrapolation * (candidate_intercept - x_intercept)
        y_flat = candidate_flat + extrapolation * (candidate_flat - x_flat)
        at_iterate = extrapolation == 0.0 or (
            candidate_intercept == x_intercept and np.array_equal(candidate_flat, x_flat)
        )

        x_intercept, x_flat, x_objective = candidate_intercept, candidate_flat, candidate_objective
        momentum = next_momentum
        trace.append(x_objective)

        if change < config.rel_tol and mapping <= config.grad_tol:
            converged = True
            break

    if not converged:
        logger.warning(
            f"Solver stopped at max_iters={config.max_iters} without converging "
            f"(lambda1={params.lambda1:.3g}, lambda2={params.lambda2:.3g})"
        )

    logger.debug(
        f"Fit lambda1={params.lambda1:.4g} lambda2={params.lambda2:.4g}: {iteration} iterations, "
        f"objective {x_objective:.10g}, {backtracks} backtracks, {restarts} restarts"
    )

    return FitResult(
        beta=Coefficients.from_flat(x_intercept, x_flat, design.group_sizes),
        objective_trace=np.asarray(trace),
        iterations=iteration,
        converged=converged,
        step=step,
        params=params,
        backtracks=backtracks,
        restarts=restarts,
        bin_counts=design.column_counts(),
    )
