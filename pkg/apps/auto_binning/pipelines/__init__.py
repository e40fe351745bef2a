from .compare import compare
from .fit import FitOutcome, fit
from .predict import load_model, predict
from .synth import synth

__all__ = [
    "compare",
    "fit",
    "FitOutcome",
    "load_model",
    "predict",
    "synth"
]
