"""The vector field on the 3-sphere, its SO(2) quotient and the planar reduced system.

Every polynomial is summed in a fixed term order, so results are bit-reproducible on any
platform with IEEE doubles. All functions take plain floats out of the state first; this is
several times faster than elementwise numpy arithmetic on 4-vectors.
"""

from typing import ClassVar

import numpy as np
from numpy.typing import NDArray

from bykov_lab.configs.model import ModelParams
from bykov_lab.core.errors import QuotientInvalid
from bykov_lab.core.state import State
from bykov_lab.core.vector_field import VectorField


def eval_field_4d(p: ModelParams, x: State) -> State:
    """ẋ of the full system, including the kappa-scaled symmetry-breaking term."""
    x1, x2, x3, x4 = float(x[0]), float(x[1]), float(x[2]), float(x[3])
    alpha, beta, omega, tau1, tau2, kappa = p.alpha, p.beta, p.omega, p.tau1, p.tau2, p.kappa
    s = 1.0 - (x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4)

    dx1 = x1 * s - omega * x2 - alpha * x1 * x4 + beta * x1 * x4 * x4 + tau2 * x1 * x3 * x4
    dx2 = x2 * s + omega * x1 - alpha * x2 * x4 + beta * x2 * x4 * x4
    dx3 = x3 * s + alpha * x3 * x4 + beta * x3 * x4 * x4 + tau1 * x4 * x4 * x4 - tau2 * x1 * x1 * x4
    dx4 = (
        x4 * s
        - alpha * (x3 * x3 - x1 * x1 - x2 * x2)
        - beta * x4 * (x1 * x1 + x2 * x2 + x3 * x3)
        - tau1 * x3 * x4 * x4
    )
    if kappa != 0.0:
        dx1 += kappa * (x1 * x3 * x4)
        dx2 += kappa * (-x1 * x2 * x2)
        dx3 += kappa * (x3 * x3 * x3)
        dx4 += kappa * (-x1 * x3 * x4)
    return np.array([dx1, dx2, dx3, dx4])


def eval_jacobian_4d(p: ModelParams, x: State) -> NDArray[np.float64]:
    """Analytic Jacobian of `eval_field_4d`."""
    x1, x2, x3, x4 = float(x[0]), float(x[1]), float(x[2]), float(x[3])
    alpha, beta, omega, tau1, tau2, kappa = p.alpha, p.beta, p.omega, p.tau1, p.tau2, p.kappa
    s = 1.0 - (x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4)
    c = tau2 + kappa  # both multiply x1*x3*x4 in the first component

    return np.array(
        [
            [
                s - 2.0 * x1 * x1 - alpha * x4 + beta * x4 * x4 + c * x3 * x4,
                -2.0 * x1 * x2 - omega,
                -2.0 * x1 * x3 + c * x1 * x4,
                -2.0 * x1 * x4 - alpha * x1 + 2.0 * beta * x1 * x4 + c * x1 * x3,
            ],
            [
                -2.0 * x1 * x2 + omega - kappa * x2 * x2,
                s - 2.0 * x2 * x2 - alpha * x4 + beta * x4 * x4 - 2.0 * kappa * x1 * x2,
                -2.0 * x2 * x3,
                -2.0 * x2 * x4 - alpha * x2 + 2.0 * beta * x2 * x4,
            ],
            [
                -2.0 * x1 * x3 - 2.0 * tau2 * x1 * x4,
                -2.0 * x2 * x3,
                s - 2.0 * x3 * x3 + alpha * x4 + beta * x4 * x4 + 3.0 * kappa * x3 * x3,
                -2.0 * x3 * x4 + alpha * x3 + 2.0 * beta * x3 * x4 + 3.0 * tau1 * x4 * x4 - tau2 * x1 * x1,
            ],
            [
                -2.0 * x1 * x4 + 2.0 * alpha * x1 - 2.0 * beta * x1 * x4 - kappa * x3 * x4,
                -2.0 * x2 * x4 + 2.0 * alpha * x2 - 2.0 * beta * x2 * x4,
                -2.0 * x3 * x4 - 2.0 * alpha * x3 - 2.0 * beta * x3 * x4 - tau1 * x4 * x4 - kappa * x1 * x4,
                s - 2.0 * x4 * x4 - beta * (x1 * x1 + x2 * x2 + x3 * x3) - 2.0 * tau1 * x3 * x4 - kappa * x1 * x3,
            ],
        ]
    )


def _check_quotient(p: ModelParams) -> None:
    if p.tau2 != 0.0:
        raise QuotientInvalid(f"The SO(2) quotient needs tau2 = 0, got tau2={p.tau2}.")
    if p.kappa != 0.0:
        raise QuotientInvalid(f"The SO(2) quotient needs kappa = 0, got kappa={p.kappa}.")


def eval_field_3d(p: ModelParams, y: State) -> State:
    """Quotient field in (ρ, x₃, x₄), valid while the SO(2) symmetry holds (tau2 = kappa = 0)."""
    _check_quotient(p)
    rho, x3, x4 = float(y[0]), float(y[1]), float(y[2])
    alpha, beta, tau1 = p.alpha, p.beta, p.tau1
    s = 1.0 - (rho * rho + x3 * x3 + x4 * x4)

    drho = rho * s - alpha * rho * x4 + beta * rho * x4 * x4
    dx3 = x3 * s + alpha * x3 * x4 + beta * x3 * x4 * x4 + tau1 * x4 * x4 * x4
    dx4 = x4 * s - alpha * (x3 * x3 - rho * rho) - beta * x4 * (rho * rho + x3 * x3) - tau1 * x3 * x4 * x4
    return np.array([drho, dx3, dx4])


def eval_jacobian_3d(p: ModelParams, y: State) -> NDArray[np.float64]:
    _check_quotient(p)
    rho, x3, x4 = float(y[0]), float(y[1]), float(y[2])
    alpha, beta, tau1 = p.alpha, p.beta, p.tau1
    s = 1.0 - (rho * rho + x3 * x3 + x4 * x4)

    return np.array(
        [
            [
                s - 2.0 * rho * rho - alpha * x4 + beta * x4 * x4,
                -2.0 * rho * x3,
                -2.0 * rho * x4 - alpha * rho + 2.0 * beta * rho * x4,
            ],
            [
                -2.0 * rho * x3,
                s - 2.0 * x3 * x3 + alpha * x4 + beta * x4 * x4,
                -2.0 * x3 * x4 + alpha * x3 + 2.0 * beta * x3 * x4 + 3.0 * tau1 * x4 * x4,
            ],
            [
                -2.0 * rho * x4 + 2.0 * alpha * rho - 2.0 * beta * rho * x4,
                -2.0 * x3 * x4 - 2.0 * alpha * x3 - 2.0 * beta * x3 * x4 - tau1 * x4 * x4,
                s - 2.0 * x4 * x4 - beta * (rho * rho + x3 * x3) - 2.0 * tau1 * x3 * x4,
            ],
        ]
    )


def eval_field_2d(p: ModelParams, z: State) -> State:
    """Planar reduced system in (x₃, x₄), the quotient restricted to the unit 2-sphere."""
    x3, x4 = float(z[0]), float(z[1])
    alpha, beta, tau1 = p.alpha, p.beta, p.tau1

    dx3 = alpha * x3 * x4 + beta * x3 * x4 * x4 + tau1 * x4 * x4 * x4
    dx4 = alpha * (1.0 - 2.0 * x3 * x3 - x4 * x4) + beta * x4 * (x4 * x4 - 1.0) - tau1 * x3 * x4 * x4
    return np.array([dx3, dx4])


def eval_jacobian_2d(p: ModelParams, z: State) -> NDArray[np.float64]:
    x3, x4 = float(z[0]), float(z[1])
    alpha, beta, tau1 = p.alpha, p.beta, p.tau1

    return np.array(
        [
            [
                alpha * x4 + beta * x4 * x4,
                alpha * x3 + 2.0 * beta * x3 * x4 + 3.0 * tau1 * x4 * x4,
            ],
            [
                -4.0 * alpha * x3 - tau1 * x4 * x4,
                -2.0 * alpha * x4 + beta * (3.0 * x4 * x4 - 1.0) - 2.0 * tau1 * x3 * x4,
            ],
        ]
    )


class FullSystem(VectorField):
    """The 4D field on ℝ⁴ whose unit sphere is invariant when kappa = 0."""

    dim: ClassVar[int] = 4

    def __init__(self, params: ModelParams):
        self.params = params

    @property
    def sphere_invariant(self) -> bool:
        return self.params.sphere_invariant

    def evaluate(self, x: State) -> State:
        return eval_field_4d(self.params, x)

    def jacobian(self, x: State) -> NDArray[np.float64]:
        return eval_jacobian_4d(self.params, x)

    def __repr__(self) -> str:
        return f"FullSystem({self.params!r})"


class QuotientSystem(VectorField):
    """The 3D quotient by SO(2)(gamma_psi). Construction fails when the symmetry is broken."""

    dim: ClassVar[int] = 3

    def __init__(self, params: ModelParams):
        _check_quotient(params)
        self.params = params

    @property
    def sphere_invariant(self) -> bool:
        return True

    def evaluate(self, x: State) -> State:
        return eval_field_3d(self.params, x)

    def jacobian(self, x: State) -> NDArray[np.float64]:
        return eval_jacobian_3d(self.params, x)

    def __repr__(self) -> str:
        return f"QuotientSystem({self.params!r})"


class PlanarSystem(VectorField):
    """The planar system in (x₃, x₄). Only alpha, beta and tau1 enter."""

    dim: ClassVar[int] = 2

    def __init__(self, params: ModelParams):
        self.params = params

    def evaluate(self, x: State) -> State:
        return eval_field_2d(self.params, x)

    def jacobian(self, x: State) -> NDArray[np.float64]:
        return eval_jacobian_2d(self.params, x)

    def __repr__(self) -> str:
        return f"PlanarSystem({self.params!r})"


def system_for(p: ModelParams, dim: int) -> VectorField:
    """Pick the system variant matching a state dimension."""
    if dim == 4:
        return FullSystem(p)
    if dim == 3:
        return QuotientSystem(p)
    if dim == 2:
        return PlanarSystem(p)
    raise ValueError(f"No system variant has dimension {dim}.")
