import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import get_args

import pandas as pd

from bykov_lab.core.cache import make_json_key
from bykov_lab.core.errors import ConfigError, ParseError
from bykov_lab.integrate.trajectory import FLOAT_FORMAT
from bykov_lab.lyapunov.classify import ColorName
from bykov_lab.sweep.grid import CellResult, SweepGrid, SweepSpec

CSV_COLUMNS = ["i", "j", "tau1", "tau2", "lambda1", "lambda2", "lambda3", "radial", "nonneg", "class"]

_COLORS: tuple[str, ...] = get_args(ColorName)
_TAU_MATCH_TOL = 1e-12


def cells_to_frame(cells: Iterable[CellResult]) -> pd.DataFrame:
    rows = [
        (c.i, c.j, c.tau1, c.tau2, c.exponents[0], c.exponents[1], c.exponents[2], c.radial, c.nonneg, c.color)
        for c in cells
    ]
    df = pd.DataFrame(rows, columns=CSV_COLUMNS)
    return df.astype(
        {
            "i": "int64",
            "j": "int64",
            "tau1": "float64",
            "tau2": "float64",
            "lambda1": "float64",
            "lambda2": "float64",
            "lambda3": "float64",
            "radial": "float64",
            "nonneg": "int64",
            "class": "object",
        }
    )


def _write(df: pd.DataFrame, path: str | Path, append: bool) -> None:
    df.to_csv(
        path,
        mode="a" if append else "w",
        header=not append,
        index=False,
        float_format=FLOAT_FORMAT,
        na_rep="nan",
        lineterminator="\n",
        encoding="utf-8",
    )


def grid_to_csv(grid: SweepGrid, path: str | Path) -> None:
    """Write all finished cells sorted by (tau2, tau1)."""
    _write(cells_to_frame(grid.sorted_cells()), path, append=False)


def append_cells(path: str | Path, cells: Sequence[CellResult]) -> None:
    """Append rows to a checkpoint file, creating it with a header first if needed."""
    _write(cells_to_frame(cells), path, append=has_cells(path))


def has_cells(path: str | Path) -> bool:
    path = Path(path)
    return path.exists() and path.stat().st_size > 0


def settings_path(path: str | Path) -> Path:
    """The record of the sweep settings kept next to a cell CSV."""
    path = Path(path)
    return path.with_name(path.name + ".settings.json")


def _settings_text(spec: SweepSpec) -> str:
    return make_json_key(spec.model_dump(mode="json"))


def write_settings(path: str | Path, spec: SweepSpec) -> None:
    settings_path(path).write_text(_settings_text(spec) + "\n", encoding="utf-8")


def check_settings(path: str | Path, spec: SweepSpec) -> None:
    """Raise ConfigError unless the cells in `path` were computed with the settings of `spec`."""
    record = settings_path(path)
    if not record.exists():
        raise ConfigError(f"{path} has no settings record {record.name}; remove it to start the sweep over")
    found = json.loads(record.read_text(encoding="utf-8"))
    expected = json.loads(_settings_text(spec))
    changed = sorted(k for k in expected.keys() | found.keys() if expected.get(k) != found.get(k))
    if changed:
        raise ConfigError(
            f"{path} was written by a sweep with different {', '.join(changed)}; "
            "remove it or rerun with the same settings"
        )


def _parse_float(value: str, column: str, line: int) -> float:
    try:
        return float(value)
    except ValueError as e:
        raise ParseError(f"column {column!r}: {value!r} is not a number", line=line) from e


def _parse_int(value: str, column: str, line: int) -> int:
    try:
        return int(value)
    except ValueError as e:
        raise ParseError(f"column {column!r}: {value!r} is not an integer", line=line) from e


def read_cells(path: str | Path) -> list[CellResult]:
    """Parse a sweep CSV, full or partial. Line numbers in errors count the header as line 1."""
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise ParseError(f"{path} is empty", line=1) from e
    except pd.errors.ParserError as e:
        raise ParseError(f"{path} is not a valid CSV file: {e}") from e
    for column in CSV_COLUMNS:
        if column not in df.columns:
            raise ParseError(f"missing column {column!r}", line=1)

    cells = []
    for idx, row in enumerate(df[CSV_COLUMNS].itertuples(index=False, name=None)):
        line = idx + 2
        i_s, j_s, tau1_s, tau2_s, l1_s, l2_s, l3_s, radial_s, nonneg_s, color = row
        if color not in _COLORS:
            raise ParseError(f"column 'class': unknown class {color!r}", line=line)
        cells.append(
            CellResult(
                i=_parse_int(i_s, "i", line),
                j=_parse_int(j_s, "j", line),
                tau1=_parse_float(tau1_s, "tau1", line),
                tau2=_parse_float(tau2_s, "tau2", line),
                exponents=(
                    _parse_float(l1_s, "lambda1", line),
                    _parse_float(l2_s, "lambda2", line),
                    _parse_float(l3_s, "lambda3", line),
                ),
                radial=_parse_float(radial_s, "radial", line),
                nonneg=_parse_int(nonneg_s, "nonneg", line),
                color=color,
            )
        )
    return cells


def csv_to_grid(path: str | Path, spec: SweepSpec) -> SweepGrid:
    """Load a sweep CSV into a grid with the geometry of `spec`; cells absent from the file stay pending."""
    grid = SweepGrid(spec)
    tau1_values, tau2_values = spec.tau1_values, spec.tau2_values
    for idx, cell in enumerate(read_cells(path)):
        line = idx + 2
        if not (0 <= cell.i < spec.n1 and 0 <= cell.j < spec.n2):
            raise ParseError(f"cell ({cell.i}, {cell.j}) lies outside the {spec.n1}x{spec.n2} grid", line=line)
        expected = (float(tau1_values[cell.i]), float(tau2_values[cell.j]))
        found = (cell.tau1, cell.tau2)
        if not all(abs(a - b) <= _TAU_MATCH_TOL for a, b in zip(expected, found, strict=True)):
            raise ParseError(f"cell ({cell.i}, {cell.j}) has taus {found}, the grid has {expected}", line=line)
        grid.add(cell)
    return grid
