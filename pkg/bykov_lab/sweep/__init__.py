from bykov_lab.sweep.grid import CellResult, SweepGrid, SweepSpec
from bykov_lab.sweep.io import (
    CSV_COLUMNS,
    append_cells,
    cells_to_frame,
    check_settings,
    csv_to_grid,
    grid_to_csv,
    read_cells,
    settings_path,
    write_settings,
)
from bykov_lab.sweep.render import grid_to_image, render_grid
from bykov_lab.sweep.runner import THREADS_ENV, cell_cache_key, compute_cell, default_workers, run_sweep

__all__ = [
    "CSV_COLUMNS",
    "THREADS_ENV",
    "CellResult",
    "SweepGrid",
    "SweepSpec",
    "append_cells",
    "cell_cache_key",
    "cells_to_frame",
    "check_settings",
    "compute_cell",
    "csv_to_grid",
    "default_workers",
    "grid_to_csv",
    "grid_to_image",
    "read_cells",
    "render_grid",
    "run_sweep",
    "settings_path",
    "write_settings",
]
