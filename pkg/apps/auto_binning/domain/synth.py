from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class SegmentEffect(BaseModel):
    """Piecewise-constant logit contribution of one informative variable on (0, 1)."""
    model_config = ConfigDict(frozen=True)

    cuts : tuple[float, ...] = Field(description = "True cut points, strictly increasing inside (0, 1)")
    contributions : tuple[float, ...] = Field(description = "Logit contribution of each segment")

    @model_validator(mode="after")
    def _valid_segments(self) -> "SegmentEffect":
        if len(self.contributions) != len(self.cuts) + 1:
            raise ValueError("need exactly one contribution per segment (len(cuts) + 1)")
        if not all(0.0 < cut < 1.0 for cut in self.cuts):
            raise ValueError("true cut points must lie strictly inside (0, 1)")
        if any(left >= right for left, right in zip(self.cuts, self.cuts[1:])):
            raise ValueError("true cut points must be strictly increasing")
        return self


class SynthSpec(BaseModel):
    """
    Synthetic dataset layout.

    Features are iid uniform(0, 1) drawn from numpy's PCG64 generator seeded
    with `seed`; the target is Bernoulli(sigmoid(intercept + sum of segment
    contributions)). Variables absent from `informative` are noise.
    """
    model_config = ConfigDict(frozen=True)

    n : int = Field(ge = 1)
    p : int = Field(ge = 1)
    informative : dict[int, SegmentEffect] = Field(default_factory = dict)
    intercept : float = 0.0
    seed : int = 0

    @model_validator(mode="after")
    def _informative_subset(self) -> "SynthSpec":
        if any(index < 0 or index >= self.p for index in self.informative):
            raise ValueError(f"informative variable indices must lie in [0, {self.p})")
        return self

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f"x{j}" for j in range(self.p))


@dataclass(frozen=True)
class GroundTruth:
    """The generating structure of a synthetic dataset."""
    informative: tuple[str, ...]
    noise: tuple[str, ...]
    cuts: dict[str, tuple[float, ...]]
    contributions: dict[str, tuple[float, ...]]
    logits: np.ndarray
