import numpy as np
from loguru import logger
from scipy import sparse

from apps.auto_binning.domain import BinGrid, ConfigError, DataError, Dataset, EncodedDesign


def fit_grid(data: Dataset, nbins: int) -> BinGrid:
    """
    Build the fine equal-frequency grid used to initialise automatic binning.

    For a column with sorted values x_(1) <= ... <= x_(n), cut k is the
    nearest-rank order statistic x_(floor(k * n / nbins) + 1), k = 1..nbins-1,
    i.e. the first observation of the (k+1)-th equal-count block. Because
    bins are left-closed, every bin then holds floor or ceil of n / nbins
    rows when the column has no ties. Duplicate cuts collapse, and a cut
    equal to the column minimum is dropped so no bin is empty on the
    training data; constant columns get a single bin.

    Args:
        data: Training dataset.
        nbins: Requested number of fine bins, at least 2.

    Returns:
        BinGrid: Cut points per variable.

    Raises:
        ConfigError: If nbins < 2.

    Example:
        >>> values = np.arange(1.0, 11.0).reshape(-1, 1)
        >>> data = Dataset(features=values, target=np.tile([0.0, 1.0], 5), names=("x",))
        >>> fit_grid(data, 5).cutpoints["x"]
        (3.0, 5.0, 7.0, 9.0)
    """
    if nbins < 2:
        raise ConfigError(f"nbins must be at least 2, got {nbins}")

    n = data.n_rows
    ranks = np.floor(np.arange(1, nbins) * n / nbins).astype(np.int64)
    ranks = np.minimum(ranks, n - 1)

    cutpoints = {}
    for j, name in enumerate(data.names):
        values = np.sort(data.features[:, j])
        cuts = np.unique(values[ranks])
        cuts = cuts[cuts > values[0]]
        if cuts.size == 0:
            logger.warning(f"Column '{name}' is constant on the training rows, using a single bin")
        cutpoints[name] = tuple(float(cut) for cut in cuts)

    grid = BinGrid(nbins=nbins, cutpoints=cutpoints)
    logger.debug(f"Equal-frequency grid: nbins={nbins}, bins per variable {grid.group_sizes}")
    return grid


def equal_width_grid(data: Dataset, nbins: int) -> BinGrid:
    """
    Cut every variable's training range into `nbins` intervals of equal length.

    Cut points are min + k * (max - min) / nbins, k = 1..nbins-1; constant
    columns get a single bin.

    Args:
        data: Training dataset.
        nbins: Number of intervals, at least 2.

    Returns:
        BinGrid: Cut points per variable.
    """
    if nbins < 2:
        raise ConfigError(f"nbins must be at least 2, got {nbins}")

    cutpoints = {}
    for j, name in enumerate(data.names):
        low = float(data.features[:, j].min())
        high = float(data.features[:, j].max())
        if high <= low:
            cutpoints[name] = ()
            continue
        width = (high - low) / nbins
        cuts = np.unique(low + np.arange(1, nbins) * width)
        cutpoints[name] = tuple(float(cut) for cut in cuts if low < cut < high)

    return BinGrid(nbins=nbins, cutpoints=cutpoints)


def assign_bin(grid: BinGrid, j: int, v: float) -> int:
    """
    0-based index of the bin of variable j containing v.

    Bin k is [c_k, c_{k+1}) with c_0 = -inf and c_m = +inf, so the mapping is
    total over the reals, including values outside the training range.
    """
    return int(np.searchsorted(grid.cuts(j), v, side="right"))


def assign_bins(grid: BinGrid, j: int, values: np.ndarray) -> np.ndarray:
    """Vectorised `assign_bin` over a column of values."""
    return np.searchsorted(grid.cuts(j), values, side="right").astype(np.int64)


def encode(data: Dataset, grid: BinGrid) -> EncodedDesign:
    """
    Expand every variable into its block of bin indicators.

    Row i, variable j contributes a single 1 in column
    offset_j + assign_bin(grid, j, x_ij).

    Args:
        data: Dataset over the grid's variables, in the grid's order.
        grid: The bin grid.

    Returns:
        EncodedDesign: Sparse indicator design with its group structure.

    Raises:
        DataError: If the dataset's variables do not match the grid's.
    """
    if data.n_features != len(grid.names):
        raise DataError(
            f"dimension mismatch: data has {data.n_features} variables, grid has {len(grid.names)}"
        )
    if data.names != grid.names:
        raise DataError(f"dimension mismatch: data variables {data.names} differ from grid variables {grid.names}")

    codes = np.column_stack([assign_bins(grid, j, data.features[:, j]) for j in range(data.n_features)])
    group_sizes = grid.group_sizes
    offsets = np.concatenate(([0], np.cumsum(group_sizes)))[:-1]

    n, p = codes.shape
    matrix = sparse.csr_matrix(
        (np.ones(n * p), (codes + offsets).ravel(), np.arange(0, n * p + 1, p)),
        shape=(n, int(sum(group_sizes))),
    )

    return EncodedDesign(matrix=matrix, codes=codes, group_sizes=group_sizes, names=grid.names)


def prebin(data: Dataset, nbins: int, rule: str = "quantile") -> BinGrid:
    """Fine grid by rule name: "quantile" for `fit_grid`, "uniform" for `equal_width_grid`."""
    if rule == "quantile":
        return fit_grid(data, nbins)
    if rule == "uniform":
        return equal_width_grid(data, nbins)
    raise ConfigError(f"unknown prebinning rule '{rule}'")
