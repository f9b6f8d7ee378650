from pathlib import Path

import numpy as np
from PIL import Image

from bykov_lab.lyapunov.classify import CLASS_COLORS
from bykov_lab.sweep.grid import SweepGrid

PENDING_RGB = (0, 0, 0)
"""Cells not computed yet."""


def grid_to_image(grid: SweepGrid) -> Image.Image:
    """One pixel per cell; x grows with tau1 and the top row is the largest tau2."""
    n1, n2 = grid.spec.n1, grid.spec.n2
    pixels = np.empty((n2, n1, 3), dtype=np.uint8)
    pixels[:, :] = PENDING_RGB
    for (i, j), cell in grid.cells.items():
        pixels[n2 - 1 - j, i] = CLASS_COLORS[cell.color]
    return Image.fromarray(pixels)


def render_grid(grid: SweepGrid, path: str | Path) -> None:
    """Write the grid as a binary PPM (P6) raster."""
    grid_to_image(grid).save(path, format="PPM")
