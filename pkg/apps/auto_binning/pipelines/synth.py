from pathlib import Path

from loguru import logger

from apps.auto_binning.application.synth import default_spec, generate
from apps.auto_binning.domain import Dataset, SynthSpec
from apps.auto_binning.infrastructure import ArtifactSet, write_dataset

SYNTH_FILE = "synth.csv"
TARGET_COLUMN = "y"


def synth(spec: SynthSpec | None, output_path: Path, n: int = 5000, p: int = 5, informative: int = 2, seed: int = 0) -> Dataset:
    """
    Pipeline to write a synthetic dataset with a known segment structure as CSV.

    Args:
        spec: Full layout; when None, `default_spec(n, p, informative, seed)` is used.
        output_path: CSV file, or a directory receiving `synth.csv`.
        n: Rows of the default layout.
        p: Variables of the default layout.
        informative: Informative leading variables of the default layout.
        seed: Generator seed of the default layout.

    Returns:
        Dataset: The generated data.
    """
    spec = spec or default_spec(n=n, p=p, informative=informative, seed=seed)
    data, truth = generate(spec)

    output_path = Path(output_path)
    if output_path.is_dir() or not output_path.suffix:
        output_path = output_path / SYNTH_FILE
    with ArtifactSet(output_path.parent) as artifacts:
        write_dataset(data, artifacts.path(output_path.name), TARGET_COLUMN)

    logger.info(
        f"Wrote {spec.n} x {spec.p} synthetic rows to {output_path}; informative {list(truth.informative)}"
    )
    return data
