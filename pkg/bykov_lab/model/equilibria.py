import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import brentq

from bykov_lab.configs.model import ModelParams
from bykov_lab.core.state import State
from bykov_lab.model.field import eval_jacobian_4d

_SCAN_POINTS = 1440


@dataclass(frozen=True)
class Equilibrium:
    state: State
    """Point (0, 0, x3, x4) on the invariant circle."""
    angle: float
    """Polar angle of (x3, x4); O1 sits at π/2 and O2 at −π/2."""
    eigenvalues: NDArray[np.complex128]
    """Eigenvalues of the 4D Jacobian, sorted by decreasing real part."""

    @property
    def label(self) -> str:
        """Which organizing-center equilibrium this one continues."""
        return "O1" if self.state[3] > 0 else "O2"


def _tangential_speed(p: ModelParams, phi: float) -> float:
    # Velocity along the circle x1 = x2 = 0, (x3, x4) = (cos φ, sin φ).
    c, s = math.cos(phi), math.sin(phi)
    return -p.alpha * c - p.beta * c * s - p.tau1 * s * s


def equilibria(p: ModelParams) -> list[Equilibrium]:
    """Equilibria of the flow on the invariant circle x1 = x2 = 0, x3² + x4² = 1.

    For tau1 = 0 these are exactly O1 = (0,0,0,1) and O2 = (0,0,0,−1). The tau1·x4³ term moves
    them along the circle, so for tau1 > 0 the returned points are their continuations.
    Only sign changes of the tangential speed are found, so a double root at a fold is missed.
    """
    if p.tau1 == 0.0:
        # Exact: the tangential speed is −cos φ·(alpha + beta·sin φ) and |beta| < alpha.
        roots = [math.pi / 2, -math.pi / 2]
    else:
        grid = np.linspace(-math.pi, math.pi, _SCAN_POINTS + 1)
        speeds = [_tangential_speed(p, float(phi)) for phi in grid]
        roots = []
        for k in range(_SCAN_POINTS):
            a, b = float(grid[k]), float(grid[k + 1])
            if speeds[k] == 0.0:
                roots.append(a)
            elif speeds[k] * speeds[k + 1] < 0.0:
                roots.append(float(brentq(lambda phi: _tangential_speed(p, phi), a, b, xtol=1e-15)))

    found = []
    for phi in sorted(roots, reverse=True):
        state = np.array([0.0, 0.0, math.cos(phi), math.sin(phi)])
        if phi in (math.pi / 2, -math.pi / 2):
            state = np.array([0.0, 0.0, 0.0, math.copysign(1.0, phi)])
        eig = np.linalg.eigvals(eval_jacobian_4d(p, state))
        eig = eig[np.argsort(-eig.real, kind="stable")]
        found.append(Equilibrium(state=state, angle=phi, eigenvalues=eig.astype(np.complex128)))
    return found


def tangent_eigenvalues(p: ModelParams, x: State) -> NDArray[np.complex128]:
    """Eigenvalues of the 4D Jacobian restricted to the tangent space of the unit sphere at x.

    The radial eigenvalue (−2 at an on-sphere equilibrium) drops out.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x / np.linalg.norm(x)
    # Orthonormal basis of the complement of n: the last three columns of a full QR of n.
    q, _ = np.linalg.qr(n.reshape(4, 1), mode="complete")
    basis = q[:, 1:]
    eig = np.linalg.eigvals(basis.T @ eval_jacobian_4d(p, x) @ basis)
    return eig[np.argsort(-eig.real, kind="stable")].astype(np.complex128)
