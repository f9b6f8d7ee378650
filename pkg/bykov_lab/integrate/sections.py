import logging
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import brentq

from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.core.state import State, as_state
from bykov_lab.core.vector_field import VectorField
from bykov_lab.integrate.stepper import iter_steps, sphere_renormalizer
from bykov_lab.integrate.trajectory import Trajectory

_logger = logging.getLogger(__name__)

Direction = Literal["increasing", "decreasing", "both"]

DEFAULT_REFINE_TOL = 1e-10


@dataclass(frozen=True)
class SectionSpec:
    """The hyperplane n·x = c, crossed in `direction`, optionally restricted to h·x > 0."""

    normal: tuple[float, ...]
    offset: float = 0.0
    direction: Direction = "increasing"
    half_space: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if not np.linalg.norm(self.normal) > 0.0:
            raise ValueError("The section normal must be nonzero.")
        if self.half_space is not None and len(self.half_space) != len(self.normal):
            raise ValueError("The half-space vector and the normal must have the same length.")

    @classmethod
    def default(cls) -> "SectionSpec":
        """x2 = 0 with x1 > 0, crossed with x2 increasing: one hit per turn of the (x1, x2) phase."""
        return cls(normal=(0.0, 1.0, 0.0, 0.0), half_space=(1.0, 0.0, 0.0, 0.0))

    @classmethod
    def x3_rising(cls, dim: int = 4) -> "SectionSpec":
        """x3 = 0 crossed with x3 increasing; matches the planar section x3 = 0, ẋ3 > 0."""
        normal = [0.0] * dim
        normal[dim - 2] = 1.0
        return cls(normal=tuple(normal))

    @property
    def dim(self) -> int:
        return len(self.normal)

    def g(self, x: State) -> float:
        return float(np.dot(self.normal, x)) - self.offset

    def accepts(self, x: State) -> bool:
        return self.half_space is None or float(np.dot(self.half_space, x)) > 0.0

    def _brackets(self, g_old: float, g_new: float) -> bool:
        rising = g_old < 0.0 <= g_new
        falling = g_old > 0.0 >= g_new
        if self.direction == "increasing":
            return rising
        if self.direction == "decreasing":
            return falling
        return rising or falling


class SectionHit(NamedTuple):
    t: float
    state: State


@dataclass(frozen=True)
class FlowRun:
    """An integration that crossing detection runs live, without storing samples."""

    field: VectorField
    x0: ArrayLike
    t_end: float
    cfg: IntegratorConfig = IntegratorConfig()
    t0: float = 0.0


class _Segment(NamedTuple):
    t_old: float
    t_new: float
    y_old: State
    y_new: State
    interpolant: Callable[[], Callable[[float], np.ndarray]]
    """Built on demand: most steps never need their dense output."""


def _trajectory_segments(traj: Trajectory) -> Iterator[_Segment]:
    if traj.dense is None:
        raise ValueError("Crossing detection on a Trajectory needs dense output; integrate with dense=True.")
    ts = traj.dense.ts
    for k, sol in enumerate(traj.dense.interpolants):
        t_old, t_new = float(ts[k]), float(ts[k + 1])
        yield _Segment(t_old, t_new, np.asarray(sol(t_old)), np.asarray(sol(t_new)), lambda sol=sol: sol)


def _live_segments(run: FlowRun) -> Iterator[_Segment]:
    y0 = as_state(run.x0, run.field.dim)
    renormalize = sphere_renormalizer(run.field, run.cfg)
    if renormalize is not None:
        y0 = renormalize(run.t0, y0)
    for step in iter_steps(run.field, run.t0, y0, run.t_end, run.cfg, renormalize):
        yield _Segment(step.t_old, step.t, step.y_old, step.y, lambda step=step: step.interpolant)


def _find_hits(segments: Iterable[_Segment], section: SectionSpec, refine_tol: float) -> Iterator[SectionHit]:
    for seg in segments:
        g_old, g_new = section.g(seg.y_old), section.g(seg.y_new)
        if not section._brackets(g_old, g_new):
            continue
        sol = seg.interpolant()

        def g_of_t(t: float, sol: Callable[[float], np.ndarray] = sol) -> float:
            return section.g(np.asarray(sol(t)))

        ga, gb = g_of_t(seg.t_old), g_of_t(seg.t_new)
        if gb == 0.0:
            t_hit = seg.t_new
        elif ga * gb > 0.0:
            # The interpolant end differs from the step end by rounding only.
            t_hit = seg.t_new if abs(gb) <= abs(ga) else seg.t_old
        else:
            t_hit = float(brentq(g_of_t, seg.t_old, seg.t_new, xtol=1e-14, maxiter=200))
        x_hit = np.asarray(sol(t_hit), dtype=np.float64)
        if not section.accepts(x_hit):
            continue
        residual = abs(section.g(x_hit))
        if not residual < refine_tol:
            _logger.warning(
                "Dropping section crossing at t=%.17g: |g|=%.3g is not below %.3g", t_hit, residual, refine_tol
            )
            continue
        yield SectionHit(t_hit, x_hit)


def iter_crossings(
    source: Trajectory | FlowRun, section: SectionSpec, refine_tol: float = DEFAULT_REFINE_TOL
) -> Iterator[SectionHit]:
    """Lazy version of `detect_crossings`."""
    if not refine_tol > 0.0:
        raise ValueError(f"refine_tol must be positive, got {refine_tol}")
    segments = _trajectory_segments(source) if isinstance(source, Trajectory) else _live_segments(source)
    return _find_hits(segments, section, refine_tol)


def detect_crossings(
    source: Trajectory | FlowRun, section: SectionSpec, refine_tol: float = DEFAULT_REFINE_TOL
) -> list[SectionHit]:
    """Crossings of `section` in time order, each refined on the dense output until |g| < refine_tol.

    Only sign changes of g between the ends of an accepted step are seen: a trajectory that
    touches the section tangentially, or crosses it twice within one step, is not detected.
    """
    return list(iter_crossings(source, section, refine_tol))
