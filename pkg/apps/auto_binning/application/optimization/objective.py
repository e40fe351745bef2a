import numpy as np
from scipy.special import expit

from apps.auto_binning.domain import Coefficients, DataError, EncodedDesign, PenaltyParams


def log1pexp(z: np.ndarray) -> np.ndarray:
    """log(1 + e^z) evaluated as max(z, 0) + log1p(e^{-|z|})."""
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


class BinnedLogisticLoss:
    """
    Scaled logistic negative log-likelihood over a one-hot design.

    Works on the flat coefficient vector (all groups concatenated). Every
    row activates exactly one column per group, so the linear predictor is
    a gather-and-sum over `flat_codes` and the gradient a bincount.
    """

    def __init__(self, design: EncodedDesign, target: np.ndarray, rows: np.ndarray | None = None) -> None:
        target = np.asarray(target, dtype=np.float64)
        if target.shape != (design.n_rows,):
            raise DataError(f"target has shape {target.shape}, design has {design.n_rows} rows")

        flat_codes = design.flat_codes
        if rows is not None:
            flat_codes, target = flat_codes[rows], target[rows]

        self.flat_codes = np.ascontiguousarray(flat_codes)
        self.raveled_codes = self.flat_codes.ravel()
        self.target = target
        self.n_rows, self.n_groups = self.flat_codes.shape
        self.n_columns = design.total_columns

    def logit(self, intercept: float, flat: np.ndarray) -> np.ndarray:
        return intercept + flat[self.flat_codes].sum(axis=1)

    def value(self, intercept: float, flat: np.ndarray) -> float:
        z = self.logit(intercept, flat)
        return float(np.sum(log1pexp(z) - self.target * z) / self.n_rows)

    def gradient(self, intercept: float, flat: np.ndarray) -> tuple[float, np.ndarray]:
        residual = expit(self.logit(intercept, flat)) - self.target
        return self._gradient_from_residual(residual)

    def value_and_gradient(self, intercept: float, flat: np.ndarray) -> tuple[float, float, np.ndarray]:
        z = self.logit(intercept, flat)
        value = float(np.sum(log1pexp(z) - self.target * z) / self.n_rows)
        intercept_grad, flat_grad = self._gradient_from_residual(expit(z) - self.target)
        return value, intercept_grad, flat_grad

    def _gradient_from_residual(self, residual: np.ndarray) -> tuple[float, np.ndarray]:
        flat_grad = np.bincount(
            self.raveled_codes,
            weights=np.repeat(residual, self.n_groups),
            minlength=self.n_columns,
        )
        return float(np.sum(residual) / self.n_rows), flat_grad / self.n_rows


def _check_shapes(design: EncodedDesign, beta: Coefficients) -> None:
    if beta.group_sizes != design.group_sizes:
        raise DataError(
            f"shape mismatch: coefficient groups {beta.group_sizes} vs design groups {design.group_sizes}"
        )


def predict_logit(design: EncodedDesign, beta: Coefficients) -> np.ndarray:
    """
    Linear predictor z_i = beta_0 + sum_{j,k} beta_{j,k} x_{i,j,k}; P(y=1) = sigmoid(z).
    """
    _check_shapes(design, beta)
    return beta.intercept + beta.flat()[design.flat_codes].sum(axis=1)


def nll(design: EncodedDesign, target: np.ndarray, beta: Coefficients) -> float:
    """
    (1/n) * sum_i [log(1 + e^{z_i}) - y_i z_i]; equals log 2 at beta = 0.
    """
    _check_shapes(design, beta)
    return BinnedLogisticLoss(design, target).value(beta.intercept, beta.flat())


def nll_gradient(design: EncodedDesign, target: np.ndarray, beta: Coefficients) -> Coefficients:
    """
    Gradient of `nll`, shaped like the coefficients.

    d/d beta_{j,k} = (1/n) sum over rows in bin k of variable j of (sigmoid(z_i) - y_i);
    d/d beta_0 = (1/n) sum_i (sigmoid(z_i) - y_i). Empty bins get exactly 0.
    """
    _check_shapes(design, beta)
    intercept_grad, flat_grad = BinnedLogisticLoss(design, target).gradient(beta.intercept, beta.flat())
    return Coefficients.from_flat(intercept_grad, flat_grad, design.group_sizes)


def penalty_value(beta: Coefficients, params: PenaltyParams) -> float:
    """
    lambda1 * sum_j sum_k |beta_{j,k+1} - beta_{j,k}| + lambda2 * sum_j w_j ||beta_j||_2.
    The intercept is excluded.
    """
    if len(params.group_weights) != len(beta.groups):
        raise DataError(f"{len(params.group_weights)} group weights given for {len(beta.groups)} groups")

    return penalty_of_groups(beta.groups, params)


def penalty_of_groups(groups: list[np.ndarray] | tuple[np.ndarray, ...], params: PenaltyParams) -> float:
    fused = sum(float(np.abs(np.diff(group)).sum()) for group in groups)
    grouped = sum(weight * float(np.linalg.norm(group)) for group, weight in zip(groups, params.group_weights))
    return params.lambda1 * fused + params.lambda2 * grouped
