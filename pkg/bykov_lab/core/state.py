from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

State = NDArray[np.float64]
"""A phase-space point: length 4 (full system), 3 (quotient) or 2 (planar system)."""

STATE_DIMS = (2, 3, 4)

COORD_NAMES: dict[int, tuple[str, ...]] = {
    4: ("x1", "x2", "x3", "x4"),
    3: ("rho", "x3", "x4"),
    2: ("x3", "x4"),
}


def as_state(x: ArrayLike, dim: int | None = None) -> State:
    """Copy `x` into a float64 state vector, checking its length against `dim` when given."""
    state = np.array(x, dtype=np.float64).reshape(-1)
    if dim is not None and state.shape[0] != dim:
        raise ValueError(f"Expected a state of length {dim}, got {state.shape[0]}.")
    if dim is None and state.shape[0] not in STATE_DIMS:
        raise ValueError(f"State length must be one of {STATE_DIMS}, got {state.shape[0]}.")
    return state


def parse_state(text: str, dim: int | None = None) -> State:
    """Parse a comma-separated initial condition such as "0.1,0.1,0,-0.99"."""
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as e:
        raise ValueError(f"Invalid state {text!r}: {e}") from e
    return as_state(values, dim)


def radius_squared(x: Sequence[float] | State) -> float:
    """r² = x₁²+x₂²+x₃²+x₄² (or the sum of squares of any state)."""
    return float(sum(float(v) * float(v) for v in x))


def norm_drift(x: Sequence[float] | State) -> float:
    """|r² − 1|: distance of a state from the unit sphere, measured on r²."""
    return abs(radius_squared(x) - 1.0)


def quotient_coordinates(x: Sequence[float] | State) -> State:
    """Map a 4D state to the SO(2) orbit space coordinates (ρ, x₃, x₄) with ρ² = x₁² + x₂²."""
    x1, x2, x3, x4 = (float(v) for v in x)
    return np.array([np.hypot(x1, x2), x3, x4])


def project_to_sphere(x: State) -> State:
    return x / np.linalg.norm(x)
