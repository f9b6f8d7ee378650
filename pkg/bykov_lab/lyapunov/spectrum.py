"""Lyapunov spectra from the variational flow with periodic QR reorthonormalization.

The state, the tangent frame and the running integral of tr J are integrated together as one
ODE. Every `gs_interval` time units (at the end of the first accepted step past the scheduled
time) the frame is reorthonormalized and the logarithms of the diagonal of R are accumulated.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict

from bykov_lab.configs.lyapunov import SpectrumSettings
from bykov_lab.configs.model import ORBIT_START, ModelParams
from bykov_lab.core.errors import RadialAnomaly
from bykov_lab.core.state import State, as_state, project_to_sphere
from bykov_lab.core.vector_field import VectorField
from bykov_lab.integrate.stepper import flow_map, iter_rhs_steps
from bykov_lab.model.field import FullSystem

_logger = logging.getLogger(__name__)

RADIAL_BOUND = -0.5
"""The dropped exponent must stay below this; at the unperturbed sphere the radial rate is −2."""

TAIL_FRACTION = 0.1


@dataclass
class TangentFrame:
    """k tangent vectors, stored as the columns of `vectors`, and their accumulated log growth."""

    vectors: NDArray[np.float64]
    log_sums: NDArray[np.float64] = field(init=False)

    def __post_init__(self) -> None:
        self.log_sums = np.zeros(self.vectors.shape[1])

    @classmethod
    def identity(cls, dim: int, k: int) -> "TangentFrame":
        return cls(np.eye(dim, k))

    @property
    def k(self) -> int:
        return int(self.vectors.shape[1])

    def reorthonormalize(self) -> NDArray[np.float64]:
        """Replace the vectors by the Q factor of their QR decomposition and return log|diag R|.

        The signs are fixed so that R has a positive diagonal, which makes the result identical to
        modified Gram-Schmidt in exact arithmetic.
        """
        q, r = np.linalg.qr(self.vectors)
        diag = np.diag(r)
        signs = np.where(diag < 0.0, -1.0, 1.0)
        self.vectors = q * signs
        growth = np.log(np.abs(diag))
        self.log_sums += growth
        return growth

    def orthonormality_error(self) -> float:
        """max |VᵀV − I| over all entries."""
        gram = self.vectors.T @ self.vectors
        return float(np.max(np.abs(gram - np.eye(self.k))))


class SpectrumResult(BaseModel):
    """Lyapunov exponents of one orbit with their convergence diagnostics."""

    exponents: tuple[float, ...]
    """On-sphere spectrum, descending."""
    radial_exponent: float
    """The most negative raw exponent, dropped as the direction normal to the sphere (NaN if not computed)."""
    raw_exponents: tuple[float, ...]
    """All computed exponents, descending."""
    T_total: float
    t_transient: float
    gs_interval: float
    converged: bool
    tail_variation: float
    """Largest spread of any running exponent estimate over the last 10% of the averaging window."""
    mean_divergence: float
    """Time average of tr J along the orbit; equals the sum of the raw exponents when all are computed."""
    positive_hint: bool
    """λ1 > 3·zero_tol: a hint that the yellow class is chaos rather than a torus."""
    final_state: tuple[float, ...]
    max_orthonormality_error: float

    model_config = ConfigDict(frozen=True, extra="forbid")

    @property
    def exponent_sum(self) -> float:
        return math.fsum(self.raw_exponents)


class _VariationalRun:
    """Right-hand side and reorthonormalization schedule of the coupled state + frame system."""

    def __init__(self, vf: VectorField, k: int, t_start: float, settings: SpectrumSettings, project: bool):
        self.vf = vf
        self.n = vf.dim
        self.k = k
        self.t_start = t_start
        self.gs_interval = settings.gs_interval
        self.project = project
        self.frame = TangentFrame.identity(self.n, k)
        self.next_gs = t_start + settings.gs_interval
        self.n_reorth = 0
        self.max_ortho_error = 0.0
        self.history_t: list[float] = []
        self.history: list[NDArray[np.float64]] = []

    def pack(self, x: State) -> State:
        return np.concatenate([x, self.frame.vectors.reshape(-1), [0.0]])

    def rhs(self, t: float, y: State) -> State:
        n, k = self.n, self.k
        x = y[:n]
        jac = self.vf.jacobian(x)
        dphi = jac @ y[n : n + n * k].reshape(n, k)
        return np.concatenate([self.vf.evaluate(x), dphi.reshape(-1), [float(np.trace(jac))]])

    def reorthonormalize(self, t: float, y: State) -> None:
        n, k = self.n, self.k
        self.frame.vectors = y[n : n + n * k].reshape(n, k).copy()
        self.frame.reorthonormalize()
        self.max_ortho_error = max(self.max_ortho_error, self.frame.orthonormality_error())
        y[n : n + n * k] = self.frame.vectors.reshape(-1)
        self.n_reorth += 1
        if t > self.t_start:
            self.history_t.append(t)
            self.history.append(self.frame.log_sums / (t - self.t_start))

    def after_step(self, t: float, y: State) -> State:
        if self.project:
            y[: self.n] = project_to_sphere(y[: self.n])
        if t >= self.next_gs:
            self.reorthonormalize(t, y)
            while self.next_gs <= t:
                self.next_gs += self.gs_interval
        return y


def _tail_variation(times: list[float], history: list[NDArray[np.float64]], t_start: float, t_end: float) -> float:
    if not history:
        return math.inf
    cutoff = t_end - TAIL_FRACTION * (t_end - t_start)
    tail = np.array([h for t, h in zip(times, history, strict=True) if t >= cutoff])
    if len(tail) < 2:
        return math.inf
    return float(np.max(tail.max(axis=0) - tail.min(axis=0)))


def field_spectrum(
    vf: VectorField,
    x0: ArrayLike,
    settings: SpectrumSettings | None = None,
    *,
    check_radial: bool = True,
) -> SpectrumResult:
    """Lyapunov spectrum of the orbit of `vf` through x0.

    The first `settings.t_transient` time units are integrated without the frame and discarded.
    For sphere-invariant fields the base orbit is projected back onto the unit sphere after every
    accepted step. When the frame spans the whole space, the most negative exponent is reported
    as `radial_exponent` and the rest as `exponents`.
    """
    settings = settings or SpectrumSettings()
    cfg = settings.integrator
    project = vf.sphere_invariant
    x = as_state(x0, vf.dim)
    if project:
        x = project_to_sphere(x)
    t_start, t_end = settings.t_transient, settings.T
    if t_start > 0.0:
        x = flow_map(vf, x, 0.0, t_start, cfg.model_copy(update={"project_to_sphere": project}))

    k = min(settings.n_vectors, vf.dim)
    run = _VariationalRun(vf, k, t_start, settings, project)
    y = run.pack(x)
    for step in iter_rhs_steps(run.rhs, t_start, y, t_end, cfg, renormalize=run.after_step):
        y = step.y
    # The last accepted step ends exactly at T and is never handed to the renormalize hook.
    if project:
        y[: vf.dim] = project_to_sphere(y[: vf.dim])
    run.reorthonormalize(t_end, y)

    span = t_end - t_start
    raw = np.sort(run.frame.log_sums / span)[::-1]
    if k == vf.dim and k > 1:
        exponents, radial = raw[:-1], float(raw[-1])
    else:
        exponents, radial = raw, math.nan
    tail = _tail_variation(run.history_t, run.history, t_start, t_end)
    result = SpectrumResult(
        exponents=tuple(float(v) for v in exponents),
        radial_exponent=radial,
        raw_exponents=tuple(float(v) for v in raw),
        T_total=t_end,
        t_transient=t_start,
        gs_interval=settings.gs_interval,
        converged=tail < settings.convergence_tol,
        tail_variation=tail,
        mean_divergence=float(y[-1]) / span,
        positive_hint=bool(exponents[0] > 3.0 * settings.zero_tol),
        final_state=tuple(float(v) for v in y[: vf.dim]),
        max_orthonormality_error=run.max_ortho_error,
    )
    _logger.debug(
        "spectrum %s: %d reorthonormalizations, tail variation %.3g", result.raw_exponents, run.n_reorth, tail
    )
    if check_radial and not math.isnan(radial) and not radial < RADIAL_BOUND:
        raise RadialAnomaly(result, RADIAL_BOUND)
    return result


def spectrum(
    p: ModelParams,
    x0: ArrayLike = ORBIT_START,
    settings: SpectrumSettings | None = None,
    *,
    check_radial: bool = True,
) -> SpectrumResult:
    """Lyapunov spectrum of the full 4D system at parameters p."""
    return field_spectrum(FullSystem(p), x0, settings, check_radial=check_radial)
