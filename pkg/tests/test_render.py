from pathlib import Path

from bykov_lab.sweep.grid import CellResult, SweepGrid, SweepSpec
from bykov_lab.sweep.render import grid_to_image, render_grid

SPEC = SweepSpec(n1=2, n2=2)


def _grid(colors: dict[tuple[int, int], str]) -> SweepGrid:
    grid = SweepGrid(SPEC)
    for (i, j), color in colors.items():
        tau1, tau2 = SPEC.taus_at(i, j)
        grid.add(CellResult(i=i, j=j, tau1=tau1, tau2=tau2, color=color))
    return grid


def test_ppm_layout(tmp_path: Path) -> None:
    grid = _grid({(0, 0): "red", (1, 0): "blue", (0, 1): "yellow", (1, 1): "gray"})
    path = tmp_path / "grid.ppm"
    render_grid(grid, path)
    data = path.read_bytes()
    header = b"P6\n2 2\n255\n"
    assert data.startswith(header)
    # Top row is the largest tau2; within a row tau1 grows to the right.
    assert data[len(header) :] == bytes([255, 255, 0, 128, 128, 128, 255, 0, 0, 0, 0, 255])


def test_pending_cells_are_black() -> None:
    image = grid_to_image(_grid({(1, 0): "yellow"}))
    assert image.size == (2, 2)
    assert image.getpixel((1, 1)) == (255, 255, 0)
    assert image.getpixel((0, 0)) == (0, 0, 0)
    assert image.getpixel((0, 1)) == (0, 0, 0)
