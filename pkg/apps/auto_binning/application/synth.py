import numpy as np
from loguru import logger
from scipy.special import expit

from apps.auto_binning.domain import Dataset, GroundTruth, SegmentEffect, SynthSpec

DEFAULT_SEGMENTS = (
    SegmentEffect(cuts=(0.3, 0.7), contributions=(-1.0, 0.5, 1.0)),
    SegmentEffect(cuts=(0.25, 0.6), contributions=(0.8, -0.8, 0.2)),
)


def default_spec(n: int, p: int, informative: int = 2, seed: int = 0, intercept: float = 0.0) -> SynthSpec:
    """
    Synthetic layout whose first `informative` variables carry two true cuts each.

    Segment layouts cycle through DEFAULT_SEGMENTS; the remaining variables are noise.
    """
    effects = {j: DEFAULT_SEGMENTS[j % len(DEFAULT_SEGMENTS)] for j in range(min(informative, p))}
    return SynthSpec(n=n, p=p, informative=effects, intercept=intercept, seed=seed)


def generate(spec: SynthSpec) -> tuple[Dataset, GroundTruth]:
    """
    Draw a dataset with known piecewise-constant logit.

    Features are iid uniform(0, 1) from numpy's PCG64 generator seeded with
    `spec.seed`, drawn row-major as one n x p block, then one uniform per row
    decides y_i ~ Bernoulli(sigmoid(intercept + sum of segment contributions)).

    Args:
        spec: Validated synthetic layout.

    Returns:
        tuple[Dataset, GroundTruth]: The data and its generating structure.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    features = rng.random((spec.n, spec.p))

    logits = np.full(spec.n, spec.intercept, dtype=np.float64)
    for j, effect in sorted(spec.informative.items()):
        segment = np.searchsorted(np.asarray(effect.cuts), features[:, j], side="right")
        logits += np.asarray(effect.contributions)[segment]

    target = (rng.random(spec.n) < expit(logits)).astype(np.float64)
    names = spec.names

    informative = tuple(names[j] for j in sorted(spec.informative))
    truth = GroundTruth(
        informative=informative,
        noise=tuple(name for name in names if name not in informative),
        cuts={names[j]: effect.cuts for j, effect in sorted(spec.informative.items())},
        contributions={names[j]: effect.contributions for j, effect in sorted(spec.informative.items())},
        logits=logits,
    )

    logger.debug(f"Generated {spec.n} x {spec.p} synthetic rows, event rate {target.mean():.4f}")
    return Dataset(features=features, target=target, names=names), truth
