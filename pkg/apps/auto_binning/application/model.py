import math
from collections.abc import Mapping, Sequence

import numpy as np
from loguru import logger
from scipy.special import expit
from scipy.stats import rankdata

from apps.auto_binning.application.binning import encode
from apps.auto_binning.application.optimization import fit
from apps.auto_binning.domain import (
    BinGrid,
    BinningModel,
    Coefficients,
    DataError,
    Dataset,
    FitResult,
    InvariantViolation,
    PenaltyParams,
    Provenance,
    ScorecardRow,
    ScorecardTable,
    SolverConfig,
    VariableBins,
)

WOE_SMOOTHING = 0.5


def _merge_runs(coefficients: np.ndarray, counts: np.ndarray, tol: float) -> list[tuple[int, int, float]]:
    """
    Group adjacent fine bins into runs of (start, stop, merged coefficient).

    Fine bins k and k+1 share a run when their coefficients differ by at
    most `tol`; the run coefficient is the count-weighted mean of its
    members. Adjacent runs whose merged coefficients end up within `tol`
    are joined as well, so neighbouring merged bins always differ by more
    than `tol`.
    """
    def merged(start: int, stop: int) -> float:
        values, weights = coefficients[start:stop], counts[start:stop]
        if np.all(values == values[0]):
            return float(values[0])
        if weights.sum() <= 0:
            return float(np.mean(values))
        return float(np.average(values, weights=weights))

    starts = [0] + [k + 1 for k in range(coefficients.size - 1) if abs(coefficients[k + 1] - coefficients[k]) > tol]
    bounds = list(zip(starts, starts[1:] + [coefficients.size]))
    runs = [(start, stop, merged(start, stop)) for start, stop in bounds]

    joined = True
    while joined and len(runs) > 1:
        joined = False
        for index in range(len(runs) - 1):
            if abs(runs[index + 1][2] - runs[index][2]) <= tol:
                start, stop = runs[index][0], runs[index + 1][1]
                runs[index:index + 2] = [(start, stop, merged(start, stop))]
                joined = True
                break
    return runs


def structure_counts(fit_result: FitResult, tol: float = 1e-6) -> tuple[int, int]:
    """Kept-variable count and total merged-bin count `extract` would report for this fit."""
    sizes = fit_result.beta.group_sizes
    counts = fit_result.bin_counts if fit_result.bin_counts is not None else np.ones(sum(sizes))
    offsets = np.concatenate(([0], np.cumsum(sizes)))

    kept = bins = 0
    for j, coefficients in enumerate(fit_result.beta.groups):
        if float(np.max(np.abs(coefficients))) <= tol:
            continue
        kept += 1
        bins += len(_merge_runs(coefficients, np.asarray(counts[offsets[j]:offsets[j + 1]], dtype=np.float64), tol))
    return kept, bins


def extract(fit_result: FitResult, grid: BinGrid, tol: float = 1e-6) -> BinningModel:
    """
    Turn a fit into merged bins per kept variable and a list of dropped variables.

    Variable j is dropped iff max_k |beta_{j,k}| <= tol. In a kept variable,
    adjacent fine bins merge when their coefficients differ by at most tol;
    the cut points inside a merged run are deleted and the run gets the
    count-weighted mean of its members' coefficients.

    Args:
        fit_result: Solver output over the grid's encoding.
        grid: The fine grid the fit was computed on.
        tol: Nonnegative merge / drop tolerance.

    Returns:
        BinningModel: The extracted model.
    """
    beta = fit_result.beta
    if beta.group_sizes != grid.group_sizes:
        raise DataError(f"fit groups {beta.group_sizes} do not match grid groups {grid.group_sizes}")

    counts = fit_result.bin_counts
    if counts is None:
        counts = np.ones(grid.total_bins)
    offsets = np.concatenate(([0], np.cumsum(grid.group_sizes)))

    variables, dropped = [], []
    for j, name in enumerate(grid.names):
        coefficients = beta.groups[j]
        if float(np.max(np.abs(coefficients))) <= tol:
            dropped.append(name)
            continue

        runs = _merge_runs(coefficients, np.asarray(counts[offsets[j]:offsets[j + 1]], dtype=np.float64), tol)
        cuts = grid.cutpoints[name]
        merged_coefficients = [coefficient for _, _, coefficient in runs]
        if any(abs(right - left) <= tol for left, right in zip(merged_coefficients, merged_coefficients[1:])):
            raise InvariantViolation(f"merged bins of '{name}' are within the merge tolerance")
        variables.append(
            VariableBins(
                name=name,
                cutpoints=tuple(cuts[start - 1] for start, _, _ in runs[1:]),
                coefficients=tuple(merged_coefficients),
            )
        )

    logger.debug(
        f"Extracted {len(variables)} kept and {len(dropped)} dropped variables, "
        f"{sum(len(variable.coefficients) for variable in variables)} merged bins"
    )

    return BinningModel(
        intercept=beta.intercept,
        variables=tuple(variables),
        dropped=tuple(dropped),
        features=grid.names,
        provenance=Provenance(
            nbins=grid.nbins,
            lambda1=fit_result.params.lambda1,
            lambda2=fit_result.params.lambda2,
            tol=tol,
        ),
    )


def _bin_of(variable: VariableBins, values: np.ndarray | float) -> np.ndarray:
    return np.searchsorted(np.asarray(variable.cutpoints, dtype=np.float64), values, side="right")


def model_logit(model: BinningModel, data: Dataset) -> np.ndarray:
    """Linear predictor of the model for every row of `data`."""
    logit = np.full(data.n_rows, model.intercept)
    for variable in model.variables:
        column = data.features[:, data.index_of(variable.name)]
        logit = logit + np.asarray(variable.coefficients)[_bin_of(variable, column)]
    return logit


def score_dataset(model: BinningModel, data: Dataset) -> np.ndarray:
    """Probability of class 1 for every row; dropped variables may be absent from `data`."""
    return expit(model_logit(model, data))


def score(model: BinningModel, row: Sequence[float] | Mapping[str, float]) -> float:
    """
    Probability of class 1 for a single row.

    Args:
        model: The binning model.
        row: Either a mapping from variable name to value, or one value per
            model feature in the model's feature order. Values of dropped
            variables are accepted and ignored.

    Returns:
        float: sigmoid(intercept + sum of the kept variables' bin coefficients).

    Raises:
        DataError: On a missing variable or a non-finite value.
    """
    if not isinstance(row, Mapping):
        if len(row) != len(model.features):
            raise DataError(f"row has {len(row)} values, model expects {len(model.features)}")
        row = dict(zip(model.features, row))

    logit = model.intercept
    for variable in model.variables:
        if variable.name not in row:
            raise DataError(f"missing variable '{variable.name}'")
        value = float(row[variable.name])
        if not math.isfinite(value):
            raise DataError(f"non-finite value for variable '{variable.name}'")
        logit += variable.coefficients[int(_bin_of(variable, value))]
    return float(expit(logit))


def scorecard(model: BinningModel, data: Dataset) -> ScorecardTable:
    """
    Per kept variable and merged bin: coefficient, training count, event rate and WOE.

    WOE = log[(events_bin / events_total) / (nonevents_bin / nonevents_total)]
    with 0.5 added to each of the four counts, so empty bins stay finite.
    Empty bins report an event rate of 0.

    Args:
        model: The binning model.
        data: Dataset holding every kept variable and the target.

    Returns:
        ScorecardTable: One row per merged bin.
    """
    target = data.target
    events_total = float(target.sum())
    nonevents_total = float(data.n_rows - events_total)

    rows = []
    for variable in model.variables:
        column = data.features[:, data.index_of(variable.name)]
        bins = _bin_of(variable, column)
        size = len(variable.coefficients)
        counts = np.bincount(bins, minlength=size)
        events = np.bincount(bins, weights=target, minlength=size)
        edges = (-math.inf,) + tuple(variable.cutpoints) + (math.inf,)

        for k in range(size):
            nonevents = counts[k] - events[k]
            woe = math.log(
                ((events[k] + WOE_SMOOTHING) / (events_total + WOE_SMOOTHING))
                / ((nonevents + WOE_SMOOTHING) / (nonevents_total + WOE_SMOOTHING))
            )
            rows.append(
                ScorecardRow(
                    variable=variable.name,
                    bin_low=edges[k],
                    bin_high=edges[k + 1],
                    coefficient=variable.coefficients[k],
                    count=int(counts[k]),
                    event_rate=float(events[k] / counts[k]) if counts[k] else 0.0,
                    woe=woe,
                )
            )

    return ScorecardTable(rows=tuple(rows))


def auc(scores: np.ndarray, target: np.ndarray) -> float:
    """
    Area under the ROC curve as the Mann-Whitney statistic, ties counted 0.5.

    Raises:
        DataError: If the target holds a single class.
    """
    scores = np.asarray(scores, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    positives = int(np.sum(target == 1.0))
    negatives = target.size - positives
    if positives == 0 or negatives == 0:
        raise DataError("single-class target: AUC needs both classes")

    ranks = rankdata(scores, method="average")
    rank_sum = float(ranks[target == 1.0].sum())
    return (rank_sum - positives * (positives + 1) / 2.0) / (positives * negatives)


def refit_merged(model: BinningModel, data: Dataset, config: SolverConfig | None = None) -> BinningModel:
    """
    Unpenalized refit of the kept variables on the merged design.

    The merged cut points become the grid, the merged coefficients the warm
    start; the result is re-extracted with the model's tolerance. Dropped
    variables stay dropped and the provenance is marked as refit.

    Args:
        model: Model from `extract`.
        data: Training dataset.
        config: Solver settings.

    Returns:
        BinningModel: The refit model.
    """
    provenance = model.provenance.model_copy(update={"refit": True})
    if not model.variables:
        return model.model_copy(update={"provenance": provenance})

    grid = BinGrid(
        nbins=max(model.provenance.nbins, max(len(variable.coefficients) for variable in model.variables)),
        cutpoints={variable.name: variable.cutpoints for variable in model.variables},
    )
    design = encode(data.select(list(grid.names)), grid)
    warm_start = Coefficients(
        intercept=model.intercept,
        groups=tuple(np.asarray(variable.coefficients) for variable in model.variables),
    )
    params = PenaltyParams.for_groups(0.0, 0.0, design.group_sizes)
    result = fit(design, data.target, params, config, warm_start=warm_start)

    refit = extract(result, grid, model.provenance.tol)
    newly_dropped = set(refit.dropped)
    dropped = tuple(name for name in model.features if name in set(model.dropped) | newly_dropped)
    logger.info(f"Refit merged design: {len(refit.variables)} variables, {refit.total_bins} bins")

    return BinningModel(
        intercept=refit.intercept,
        variables=refit.variables,
        dropped=dropped,
        features=model.features,
        provenance=provenance,
    )
