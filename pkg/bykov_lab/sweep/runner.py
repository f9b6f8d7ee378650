"""Parallel, deterministic, resumable (tau1, tau2) sweeps.

Each cell is an independent spectrum computation, so the result of a cell never depends on the
worker that ran it or on the order cells finish in. The main process is the only writer: it
appends every finished cell to the checkpoint file and keeps the grid.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Any

import numpy as np

from bykov_lab.configs.model import ModelParams
from bykov_lab.core.cache import Cache, make_json_key
from bykov_lab.core.errors import BykovLabError, RadialAnomaly, Unconverged, describe_error
from bykov_lab.core.state import State
from bykov_lab.lyapunov.classify import classify, count_nonnegative
from bykov_lab.lyapunov.spectrum import spectrum
from bykov_lab.model.equilibria import Equilibrium, equilibria
from bykov_lab.sweep.grid import CellIndex, CellResult, SweepGrid, SweepSpec
from bykov_lab.sweep.io import append_cells, check_settings, csv_to_grid, has_cells, write_settings

_logger = logging.getLogger(__name__)

THREADS_ENV = "BYKOV_LAB_THREADS"


def default_workers() -> int:
    """Worker count from BYKOV_LAB_THREADS, falling back to 1."""
    value = os.environ.get(THREADS_ENV, "").strip()
    if not value:
        return 1
    try:
        workers = int(value)
    except ValueError:
        _logger.warning("Ignoring %s=%r: not an integer", THREADS_ENV, value)
        return 1
    return max(workers, 1)


SADDLE_TOL = 1e-6
"""Distance from an equilibrium below which a final state counts as sitting on it."""


def resting_saddle(p: ModelParams, state: State | tuple[float, ...]) -> Equilibrium | None:
    """The unstable equilibrium on the invariant circle that `state` sits on, if any."""
    x = np.asarray(state, dtype=np.float64)
    for eq in equilibria(p):
        if float(np.linalg.norm(x - eq.state)) < SADDLE_TOL and eq.eigenvalues[0].real > 0.0:
            return eq
    return None


def compute_cell(spec: SweepSpec, i: int, j: int) -> CellResult:
    """Spectrum and class of one cell. Library errors turn the cell gray instead of propagating."""
    tau1, tau2 = spec.taus_at(i, j)
    settings = spec.lyapunov
    try:
        s = spectrum(spec.params_at(i, j), spec.x0, settings)
    except RadialAnomaly as e:
        nonneg = count_nonnegative(e.result.exponents, settings.zero_tol)
        return CellResult.from_spectrum(i, j, tau1, tau2, e.result, nonneg, "gray", error=describe_error(e))
    except BykovLabError as e:
        return CellResult(i=i, j=j, tau1=tau1, tau2=tau2, color="gray", error=describe_error(e))

    nonneg = count_nonnegative(s.exponents, settings.zero_tol)
    # An orbit trapped in an invariant subspace can settle on a saddle; its spectrum is the
    # saddle's linearization, which says nothing about the attractor of the cell.
    saddle = resting_saddle(spec.params_at(i, j), s.final_state)
    if saddle is not None:
        error = f"orbit ended on the saddle {saddle.label}"
        return CellResult.from_spectrum(i, j, tau1, tau2, s, nonneg, "gray", error=error)
    try:
        attractor = classify(s, settings.zero_tol)
    except Unconverged as e:
        return CellResult.from_spectrum(i, j, tau1, tau2, s, nonneg, "gray", error=describe_error(e))
    return CellResult.from_spectrum(i, j, tau1, tau2, s, attractor.nonneg_count, attractor.color)


CELL_RECORD_VERSION = 1
"""Part of every cache key; bump it when CellResult changes shape."""


def cell_cache_key(spec: SweepSpec, i: int, j: int) -> str:
    """Canonical JSON of everything a cell result depends on, grid indices excluded."""
    key: dict[str, Any] = {
        "version": CELL_RECORD_VERSION,
        "params": spec.params_at(i, j).model_dump(),
        "x0": list(spec.x0),
        "lyapunov": spec.lyapunov.model_dump(),
    }
    return make_json_key(key)


def _from_cache(cache: Cache, spec: SweepSpec, i: int, j: int) -> CellResult | None:
    record = cache.lookup(cell_cache_key(spec, i, j))
    if record is None:
        return None
    _logger.debug("cache hit for cell %d %d", i, j)
    return CellResult.model_validate({**record, "i": i, "j": j})


def _to_cache(cache: Cache, spec: SweepSpec, cell: CellResult) -> None:
    cache.store(cell_cache_key(spec, cell.i, cell.j), cell.model_dump(exclude={"i", "j"}))


def run_sweep(
    spec: SweepSpec,
    workers: int = 1,
    resume_from: str | Path | None = None,
    checkpoint: str | Path | None = None,
    cache: Cache | None = None,
) -> SweepGrid:
    """Classify every cell of the grid, skipping cells already present in `resume_from`.

    With workers == 1 the cells are computed in this process, in CSV order. Finished cells are
    appended to `checkpoint` as they arrive and logged as "done i j class". Both files carry a
    settings record next to them; a file written for other settings raises ConfigError.
    """
    if workers < 1:
        raise ValueError(f"workers must be at least 1, got {workers}")
    grid = SweepGrid(spec)
    if resume_from is not None and has_cells(resume_from):
        check_settings(resume_from, spec)
        grid = csv_to_grid(resume_from, spec)
        _logger.info("resuming with %d of %d cells done", grid.done_count, spec.n_cells)
    if checkpoint is not None:
        if has_cells(checkpoint):
            check_settings(checkpoint, spec)
        write_settings(checkpoint, spec)

    def finish(cell: CellResult, cached: bool = False) -> None:
        grid.add(cell)
        if checkpoint is not None:
            append_cells(checkpoint, [cell])
        if cache is not None and not cached:
            _to_cache(cache, spec, cell)
        if cell.error:
            _logger.warning("cell %d %d failed: %s", cell.i, cell.j, cell.error)
        _logger.info("done %d %d %s", cell.i, cell.j, cell.color)

    todo: list[CellIndex] = []
    for i, j in grid.pending():
        hit = _from_cache(cache, spec, i, j) if cache is not None else None
        if hit is not None:
            finish(hit, cached=True)
        else:
            todo.append((i, j))

    if workers == 1 or len(todo) <= 1:
        for i, j in todo:
            finish(compute_cell(spec, i, j))
        return grid

    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(compute_cell, spec, i, j) for i, j in todo]
        for future in as_completed(futures):
            finish(future.result())
    return grid
