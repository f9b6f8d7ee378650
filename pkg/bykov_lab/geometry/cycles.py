import logging
import math
from dataclasses import dataclass
from itertools import pairwise

import numpy as np
from numpy.typing import ArrayLike

from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.configs.model import PLANAR_START, ModelParams
from bykov_lab.core.errors import NoCycleFound
from bykov_lab.core.state import State, as_state
from bykov_lab.core.vector_field import VectorField
from bykov_lab.integrate.sections import FlowRun, SectionHit, SectionSpec, iter_crossings
from bykov_lab.integrate.stepper import flow_map
from bykov_lab.model.field import PlanarSystem

_logger = logging.getLogger(__name__)

DEFAULT_TRANSIENT = 200.0
DEFAULT_CYCLE_TOL = 1e-8
FLOQUET_STEP = 1e-6
CONFIRM_RETURNS = 5
"""Return times averaged into the period once the section points have settled."""

PLANAR_SECTION = SectionSpec(normal=(1.0, 0.0))
"""x3 = 0 crossed with ẋ3 > 0."""


@dataclass(frozen=True, eq=False)
class LimitCycle2D:
    period: float
    section_point: State
    """Where the cycle crosses x3 = 0 upwards."""
    floquet_estimate: float
    """Derivative of the return map at `section_point`; |·| < 1 for a stable cycle."""
    return_times: tuple[float, ...]

    @property
    def stable(self) -> bool:
        return abs(self.floquet_estimate) < 1.0


def _first_return(vf: VectorField, z: State, horizon: float, cfg: IntegratorConfig) -> SectionHit:
    for hit in iter_crossings(FlowRun(vf, z, horizon, cfg), PLANAR_SECTION):
        return hit
    raise NoCycleFound(f"No return to the section within t={horizon:g} from {z.tolist()}")


def return_map(vf: VectorField, x4: float, horizon: float, cfg: IntegratorConfig) -> SectionHit:
    """Next upward crossing of x3 = 0 starting from (0, x4)."""
    return _first_return(vf, np.array([0.0, x4]), horizon, cfg)


def find_limit_cycle(
    vf: VectorField,
    z0: ArrayLike,
    t_search: float,
    *,
    transient: float = DEFAULT_TRANSIENT,
    tol: float = DEFAULT_CYCLE_TOL,
    cfg: IntegratorConfig | None = None,
) -> LimitCycle2D:
    """Attracting periodic orbit of a planar field, located through its returns to x3 = 0, ẋ3 > 0.

    After `transient` time units, successive returns are compared until two agree within `tol`.
    The period is the mean of up to five return times from there on, and the Floquet estimate is
    the central difference of the return map at the settled point.
    """
    cfg = cfg or IntegratorConfig()
    z = as_state(z0, vf.dim)
    if transient > 0.0:
        z = flow_map(vf, z, 0.0, transient, cfg)

    previous: SectionHit | None = None
    settled: list[SectionHit] = []
    n_hits = 0
    for hit in iter_crossings(FlowRun(vf, z, transient + t_search, cfg, t0=transient), PLANAR_SECTION):
        n_hits += 1
        if previous is not None and abs(hit.state[1] - previous.state[1]) < tol:
            if not settled:
                settled.append(previous)
            settled.append(hit)
            if len(settled) > CONFIRM_RETURNS:
                break
        elif settled:
            # The agreement was accidental; start over.
            settled = []
        previous = hit

    if n_hits < 2:
        raise NoCycleFound(f"Only {n_hits} section crossing(s) within t_search={t_search:g}")
    if len(settled) < 2:
        raise NoCycleFound(f"No two of {n_hits} successive section points agree within {tol:g}")

    return_times = tuple(b.t - a.t for a, b in pairwise(settled))
    period = math.fsum(return_times) / len(return_times)
    point = settled[-1].state.copy()
    x4 = float(point[1])
    horizon = 3.0 * period
    forward = return_map(vf, x4 + FLOQUET_STEP, horizon, cfg)
    backward = return_map(vf, x4 - FLOQUET_STEP, horizon, cfg)
    floquet = (float(forward.state[1]) - float(backward.state[1])) / (2.0 * FLOQUET_STEP)
    _logger.debug("cycle through x4=%.12g with period %.12g after %d returns", x4, period, n_hits)
    return LimitCycle2D(period=period, section_point=point, floquet_estimate=floquet, return_times=return_times)


def find_limit_cycle_2d(
    p: ModelParams,
    z0: ArrayLike = PLANAR_START,
    t_search: float = 2000.0,
    *,
    transient: float = DEFAULT_TRANSIENT,
    tol: float = DEFAULT_CYCLE_TOL,
    cfg: IntegratorConfig | None = None,
) -> LimitCycle2D:
    """Stable periodic solution of the planar reduced system.

    For tau1 = 0 the line x3 = 0 is invariant and orbits limit on the network through (0, ±1),
    so NoCycleFound is raised.
    """
    return find_limit_cycle(PlanarSystem(p), z0, t_search, transient=transient, tol=tol, cfg=cfg)
