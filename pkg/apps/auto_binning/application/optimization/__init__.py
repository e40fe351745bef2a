from .objective import BinnedLogisticLoss, nll, nll_gradient, penalty_value, predict_logit
from .prox import prox_group, prox_penalty, prox_tv1d
from .solver import canonical_row_order, fit, objective_at

__all__ = [
    "BinnedLogisticLoss",
    "canonical_row_order",
    "fit",
    "nll",
    "nll_gradient",
    "objective_at",
    "penalty_value",
    "predict_logit",
    "prox_group",
    "prox_penalty",
    "prox_tv1d",
]
