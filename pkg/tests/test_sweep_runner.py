import logging
import math
from pathlib import Path

import pytest

from bykov_lab.caches.in_mem_cache import InMemCache
from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.configs.lyapunov import SpectrumSettings
from bykov_lab.core.errors import ConfigError, NumericalBlowup
from bykov_lab.sweep import runner
from bykov_lab.sweep.grid import CellIndex, CellResult, SweepSpec
from bykov_lab.sweep.io import append_cells, grid_to_csv, read_cells, settings_path, write_settings
from bykov_lab.sweep.runner import THREADS_ENV, cell_cache_key, compute_cell, default_workers, run_sweep

QUICK = SpectrumSettings(T=20.0, convergence_tol=10.0, integrator=IntegratorConfig(t_transient=5.0))
SPEC = SweepSpec(tau1_range=(0.2, 0.4), tau2_range=(0.0, 0.2), n1=2, n2=2, lyapunov=QUICK)

Cells = dict[CellIndex, CellResult]


@pytest.fixture(scope="module")
def reference_cells() -> Cells:
    return run_sweep(SPEC).cells


def test_every_cell_is_classified(reference_cells: Cells) -> None:
    assert set(reference_cells) == {(0, 0), (1, 0), (0, 1), (1, 1)}
    for (i, j), cell in reference_cells.items():
        assert (cell.tau1, cell.tau2) == SPEC.taus_at(i, j)
        assert cell.color in ("red", "blue", "yellow")
        assert cell.error is None
        assert cell.radial < -1.0


def test_worker_count_does_not_change_results(reference_cells: Cells) -> None:
    assert run_sweep(SPEC, workers=2).cells == reference_cells


def test_resume_skips_finished_cells(
    tmp_path: Path, reference_cells: Cells, caplog: pytest.LogCaptureFixture
) -> None:
    path = tmp_path / "partial.csv"
    append_cells(path, [reference_cells[0, 0], reference_cells[1, 0]])
    write_settings(path, SPEC)
    with caplog.at_level(logging.INFO, logger="bykov_lab"):
        grid = run_sweep(SPEC, resume_from=path, checkpoint=path)
    assert grid.cells == reference_cells
    done = [r.getMessage() for r in caplog.records if r.getMessage().startswith("done ")]
    assert sorted(done) == sorted(f"done {i} 1 {reference_cells[i, 1].color}" for i in range(2))
    assert len(read_cells(path)) == 4


@pytest.mark.parametrize(
    ("update", "changed"),
    [
        ({"alpha": 2.0, "beta": -1.5}, "alpha, beta"),
        ({"lyapunov": QUICK.model_copy(update={"gs_interval": 0.25})}, "lyapunov"),
    ],
)
def test_resume_refuses_cells_of_other_settings(
    tmp_path: Path, reference_cells: Cells, update: dict[str, object], changed: str
) -> None:
    path = tmp_path / "grid.csv"
    append_cells(path, list(reference_cells.values()))
    write_settings(path, SPEC)
    other = SPEC.model_copy(update=update)
    with pytest.raises(ConfigError, match=f"different {changed};"):
        run_sweep(other, resume_from=path, checkpoint=path)
    with pytest.raises(ConfigError):
        run_sweep(other, checkpoint=path)
    assert len(read_cells(path)) == 4
    assert run_sweep(SPEC, resume_from=path).complete


def test_resume_needs_a_settings_record(tmp_path: Path, reference_cells: Cells) -> None:
    path = tmp_path / "grid.csv"
    append_cells(path, [reference_cells[0, 0]])
    assert not settings_path(path).exists()
    with pytest.raises(ConfigError, match="no settings record"):
        run_sweep(SPEC, resume_from=path)


def test_cache_serves_repeated_cells(reference_cells: Cells) -> None:
    cache = InMemCache()
    run_sweep(SPEC, cache=cache)
    assert (cache.stats.misses, cache.stats.stores) == (4, 4)
    again = run_sweep(SPEC, cache=cache)
    assert cache.stats.hits == 4
    assert cache.stats.stores == 4
    assert again.cells == reference_cells


def test_cache_key_ignores_grid_position() -> None:
    shifted = SPEC.model_copy(update={"tau1_range": (0.0, 0.2)})
    assert cell_cache_key(SPEC, 0, 1) == cell_cache_key(shifted, 1, 1)
    assert cell_cache_key(SPEC, 0, 0) != cell_cache_key(SPEC, 1, 0)


def test_failed_cell_is_gray(monkeypatch: pytest.MonkeyPatch) -> None:
    def blow_up(*args: object, **kwargs: object) -> None:
        raise NumericalBlowup(3.0)

    monkeypatch.setattr(runner, "spectrum", blow_up)
    cell = compute_cell(SPEC, 1, 0)
    assert cell.color == "gray"
    assert cell.nonneg == -1
    assert all(math.isnan(x) for x in cell.exponents)
    assert cell.error is not None and cell.error.startswith("NumericalBlowup")


def test_unconverged_cell_keeps_its_spectrum() -> None:
    strict = SPEC.model_copy(update={"lyapunov": QUICK.model_copy(update={"convergence_tol": 1e-12})})
    cell = compute_cell(strict, 0, 0)
    assert cell.color == "gray"
    assert cell.nonneg >= 0
    assert all(math.isfinite(x) for x in cell.exponents)
    assert cell.error is not None and "Unconverged" in cell.error


def test_default_workers(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert default_workers() == 1
    monkeypatch.setenv(THREADS_ENV, "3")
    assert default_workers() == 3
    monkeypatch.setenv(THREADS_ENV, "many")
    assert default_workers() == 1
    with pytest.raises(ValueError):
        run_sweep(SPEC, workers=0)


def test_csv_is_byte_identical_across_worker_counts(tmp_path: Path) -> None:
    one, two = tmp_path / "one.csv", tmp_path / "two.csv"
    grid_to_csv(run_sweep(SPEC, workers=1, checkpoint=one), one)
    grid_to_csv(run_sweep(SPEC, workers=2, checkpoint=two), two)
    assert one.read_bytes() == two.read_bytes()


def test_orbit_resting_on_a_saddle_is_gray() -> None:
    # At tau1 = tau2 = 0 the sample orbit stays in x3 = 0 and runs into O1.
    settings = SpectrumSettings(T=100.0, convergence_tol=10.0, integrator=IntegratorConfig(t_transient=5.0))
    spec = SweepSpec(tau1_range=(0.0, 0.5), tau2_range=(0.0, 0.5), n1=2, n2=2, lyapunov=settings)
    cell = compute_cell(spec, 0, 0)
    assert cell.color == "gray"
    assert cell.error == "orbit ended on the saddle O1"
    assert cell.nonneg >= 0


@pytest.mark.slow
def test_torus_cell_is_yellow() -> None:
    cell = compute_cell(SweepSpec(tau1_range=(0.0, 0.5), tau2_range=(0.0, 0.5), n1=2, n2=2), 1, 0)
    assert (cell.tau1, cell.tau2) == (0.5, 0.0)
    assert cell.color == "yellow"
    assert cell.error is None
    assert all(-0.01 <= x <= 0.01 for x in cell.exponents[:2])
