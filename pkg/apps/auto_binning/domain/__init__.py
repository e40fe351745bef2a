from .coefficients import Coefficients, FitResult, PenaltyParams, SolverConfig, group_weights
from .comparison import BaselineSpec, ComparisonRow, ComparisonTable
from .dataset import BinGrid, Dataset, EncodedDesign
from .exceptions import AutoBinningError, ConfigError, DataError, InvariantViolation, SolverError
from .model import BinningModel, Provenance, ScorecardRow, ScorecardTable, VariableBins
from .path import PathConfig, PathPoint, PathResult
from .run import RunConfig
from .synth import GroundTruth, SegmentEffect, SynthSpec

__all__ = [
    "AutoBinningError",
    "BaselineSpec",
    "BinGrid",
    "BinningModel",
    "Coefficients",
    "ComparisonRow",
    "ComparisonTable",
    "ConfigError",
    "DataError",
    "Dataset",
    "EncodedDesign",
    "FitResult",
    "GroundTruth",
    "InvariantViolation",
    "PathConfig",
    "PathPoint",
    "PathResult",
    "PenaltyParams",
    "Provenance",
    "RunConfig",
    "ScorecardRow",
    "ScorecardTable",
    "SegmentEffect",
    "SolverConfig",
    "SynthSpec",
    "VariableBins",
    "group_weights",
]
