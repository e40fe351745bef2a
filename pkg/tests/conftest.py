from pathlib import Path

import numpy as np
import pytest

from apps.auto_binning.application.binning import encode, fit_grid
from apps.auto_binning.application.synth import default_spec, generate
from apps.auto_binning.domain import BinGrid, Dataset, EncodedDesign


def random_design(rng: np.random.Generator, n: int, sizes: tuple[int, ...]) -> tuple[EncodedDesign, np.ndarray]:
    """Encoded design over uniform features with a grid of the given group sizes, plus a random target."""
    features = rng.random((n, len(sizes)))
    names = tuple(f"v{j}" for j in range(len(sizes)))
    target = (rng.random(n) < 0.4).astype(np.float64)
    target[:2] = (0.0, 1.0)
    data = Dataset(features=features, target=target, names=names)

    grid = BinGrid(
        nbins=max(sizes),
        cutpoints={name: tuple(float(c) for c in np.linspace(0, 1, size + 1)[1:-1]) for name, size in zip(names, sizes)},
    )
    return encode(data, grid), target


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def synth_data() -> Dataset:
    """400 rows, 3 variables, the first two informative."""
    data, _ = generate(default_spec(n=400, p=3, informative=2, seed=7))
    return data


@pytest.fixture(scope="session")
def synth_design(synth_data):
    grid = fit_grid(synth_data, 8)
    return grid, encode(synth_data, grid)


@pytest.fixture
def write_csv(tmp_path):
    """Write text to a CSV under tmp_path and return its path."""
    def write(text: str, name: str = "data.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
