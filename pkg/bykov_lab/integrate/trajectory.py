import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import OdeSolution

from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.configs.model import ModelParams
from bykov_lab.core.state import COORD_NAMES, State, as_state
from bykov_lab.core.vector_field import VectorField
from bykov_lab.integrate.stepper import iter_steps, sphere_renormalizer
from bykov_lab.model.field import system_for

FLOAT_FORMAT = "%.17g"
"""Every CSV artifact writes floats with 17 significant digits, enough to round-trip a double."""


def write_csv(df: pd.DataFrame, path: str | Path) -> None:
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States sampled every `config.sample_dt` from the start time on."""

    times: NDArray[np.float64]
    states: NDArray[np.float64]
    """One row per sample."""
    field: VectorField
    config: IntegratorConfig
    dense: OdeSolution | None = dataclasses.field(default=None, repr=False)
    """Piecewise dense output over the whole run, kept when requested."""

    @property
    def params(self) -> ModelParams | None:
        params = getattr(self.field, "params", None)
        return params if isinstance(params, ModelParams) else None

    @property
    def dim(self) -> int:
        return int(self.states.shape[1])

    @property
    def final_state(self) -> State:
        return np.array(self.states[-1])

    def __len__(self) -> int:
        return len(self.times)

    def max_norm_drift(self) -> float:
        """max |r² − 1| over all samples."""
        return float(np.max(np.abs(np.sum(self.states * self.states, axis=1) - 1.0)))

    def to_frame(self) -> pd.DataFrame:
        names = COORD_NAMES.get(self.dim, tuple(f"y{k + 1}" for k in range(self.dim)))
        df = pd.DataFrame(self.states, columns=list(names))
        df.insert(0, "t", self.times)
        return df

    def to_csv(self, path: str | Path) -> None:
        write_csv(self.to_frame(), path)


def sample_times(t0: float, t_end: float, dt: float) -> NDArray[np.float64]:
    """t0, t0 + dt, … up to t_end; products instead of a running sum keep the grid exact."""
    n = math.floor((t_end - t0) / dt + 1e-9)
    times = t0 + dt * np.arange(n + 1, dtype=np.float64)
    times[-1] = min(times[-1], t_end)
    return times


def integrate(
    source: ModelParams | VectorField,
    x0: ArrayLike,
    t_end: float,
    cfg: IntegratorConfig | None = None,
    *,
    dense: bool = False,
    t0: float = 0.0,
) -> Trajectory:
    """Integrate from x0 at t0 to t_end and sample on the `sample_dt` grid.

    A ModelParams source picks the system variant from the length of x0. When
    `cfg.project_to_sphere` is on and the field keeps the unit sphere invariant, every accepted
    step and every sample is rescaled to unit norm.
    """
    cfg = cfg or IntegratorConfig()
    if not t_end > t0:
        raise ValueError(f"t_end={t_end} must be greater than t0={t0}")
    y0 = as_state(x0)
    vf = system_for(source, len(y0)) if isinstance(source, ModelParams) else source
    if len(y0) != vf.dim:
        raise ValueError(f"{vf!r} needs a state of length {vf.dim}, got {len(y0)}")

    renormalize = sphere_renormalizer(vf, cfg)
    if renormalize is not None:
        y0 = renormalize(t0, y0)

    times = sample_times(t0, t_end, cfg.sample_dt)
    states = np.empty((len(times), len(y0)))
    states[0] = y0
    next_idx = 1
    step_ends: list[float] = [t0]
    interpolants = []
    for step in iter_steps(vf, t0, y0, t_end, cfg, renormalize):
        stop = int(np.searchsorted(times, step.t, side="right"))
        if stop > next_idx or dense:
            sol = step.interpolant
            if stop > next_idx:
                states[next_idx:stop] = np.asarray(sol(times[next_idx:stop])).T
                next_idx = stop
            if dense:
                step_ends.append(step.t)
                interpolants.append(sol)
    if renormalize is not None:
        states /= np.linalg.norm(states, axis=1, keepdims=True)

    dense_output = OdeSolution(step_ends, interpolants) if dense and interpolants else None
    return Trajectory(times=times, states=states, field=vf, config=cfg, dense=dense_output)
