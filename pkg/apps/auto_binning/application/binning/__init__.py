from .grid import assign_bin, assign_bins, encode, equal_width_grid, fit_grid, prebin

__all__ = ["assign_bin", "assign_bins", "encode", "equal_width_grid", "fit_grid", "prebin"]
