"""Accepted-step iteration over scipy's embedded explicit Runge-Kutta pairs.

Everything that integrates in this package goes through `iter_steps`: trajectories sample the
dense output, crossing detection brackets sign changes step by step and the Lyapunov engine
reorthonormalizes its tangent frame between steps.
"""

import logging
from collections.abc import Callable, Iterator

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import DOP853, RK45

from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.core.errors import IntegrationStalled, NumericalBlowup
from bykov_lab.core.state import State, project_to_sphere
from bykov_lab.core.vector_field import VectorField

_logger = logging.getLogger(__name__)

_METHODS = {"RK45": RK45, "DOP853": DOP853}

_BLOWUP_NORM = 1e150

Renormalizer = Callable[[float, State], State]
"""Maps (t, y) at the end of an accepted step to the state the integration continues from."""

RhsFunction = Callable[[float, State], State]

_Solver = RK45 | DOP853


class AcceptedStep:
    """One accepted step from `t_old` to `t`.

    The dense interpolant is built on first access and is only available until the generator
    that produced the step is advanced.
    """

    def __init__(self, t_old: float, t: float, y_old: State, y: State, solver: "_Solver"):
        self.t_old = t_old
        self.t = t
        self.y_old = y_old
        self.y = y
        self._solver: _Solver | None = solver
        self._interpolant: Callable[[ArrayLike], np.ndarray] | None = None

    @property
    def interpolant(self) -> Callable[[ArrayLike], np.ndarray]:
        if self._interpolant is None:
            if self._solver is None:
                raise RuntimeError("The dense output of a step is gone once the step iterator moves on.")
            self._interpolant = self._solver.dense_output()
        return self._interpolant

    def _expire(self) -> None:
        self._solver = None


def _make_solver(fun: RhsFunction, t0: float, y0: State, t_bound: float, cfg: IntegratorConfig) -> _Solver:
    solver_cls = _METHODS[cfg.method]
    return solver_cls(fun, t0, y0, t_bound, rtol=cfg.rtol, atol=cfg.atol, max_step=cfg.max_step, vectorized=False)


def _check_failure(fun: RhsFunction, solver: _Solver, message: str | None) -> None:
    t, y = float(solver.t), np.array(solver.y, dtype=np.float64)
    # A blowup shows up as endless step rejections, so look at the state before blaming the step size.
    with np.errstate(all="ignore"):
        finite = bool(np.all(np.isfinite(y))) and bool(np.all(np.isfinite(fun(t, y))))
    if not finite or float(np.max(np.abs(y))) > _BLOWUP_NORM:
        raise NumericalBlowup(t)
    raise IntegrationStalled(message or "step size underflow", t=t, state=y)


def iter_rhs_steps(
    fun: RhsFunction,
    t0: float,
    y0: ArrayLike,
    t_bound: float,
    cfg: IntegratorConfig,
    renormalize: Renormalizer | None = None,
) -> Iterator[AcceptedStep]:
    """Yield the accepted steps of an integration of ẏ = fun(t, y) from t0 towards t_bound.

    Backward integration (t_bound < t0) is allowed. If `renormalize` is given, the state each step
    ends in is replaced by `renormalize(t, y)` before the next step starts.
    """
    y = np.array(y0, dtype=np.float64)
    if t_bound == t0:
        return
    solver = _make_solver(fun, t0, y, t_bound, cfg)
    n_steps = 0
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            _check_failure(fun, solver, message)
        if not np.all(np.isfinite(solver.y)):
            raise NumericalBlowup(float(solver.t))
        n_steps += 1
        step = AcceptedStep(float(solver.t_old), float(solver.t), solver.y_old.copy(), solver.y.copy(), solver)
        yield step
        step._expire()
        if renormalize is not None and solver.status == "running":
            new_y = np.asarray(renormalize(float(solver.t), solver.y.copy()), dtype=np.float64)
            solver.y = new_y
            solver.f = solver.fun(solver.t, new_y)
    _logger.debug("integrated t=%g..%g in %d steps (%d rhs evaluations)", t0, t_bound, n_steps, solver.nfev)


def iter_steps(
    field: VectorField,
    t0: float,
    y0: ArrayLike,
    t_bound: float,
    cfg: IntegratorConfig,
    renormalize: Renormalizer | None = None,
) -> Iterator[AcceptedStep]:
    """`iter_rhs_steps` for a vector field."""
    return iter_rhs_steps(field, t0, y0, t_bound, cfg, renormalize)


def sphere_renormalizer(field: VectorField, cfg: IntegratorConfig) -> Renormalizer | None:
    """The projection hook for `iter_steps`, or None when projecting would be wrong or is off."""
    if cfg.project_to_sphere and field.sphere_invariant:
        return lambda t, y: project_to_sphere(y)
    return None


def flow_map(field: VectorField, x0: ArrayLike, t0: float, t1: float, cfg: IntegratorConfig) -> State:
    """State reached at t1 from x0 at t0; t1 < t0 integrates backwards."""
    y = np.array(x0, dtype=np.float64)
    renormalize = sphere_renormalizer(field, cfg)
    for step in iter_steps(field, t0, y, t1, cfg, renormalize):
        y = step.y
    if renormalize is not None:
        y = renormalize(t1, y)
    return y
