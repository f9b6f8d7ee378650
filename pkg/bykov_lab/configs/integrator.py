from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class IntegratorConfig(BaseModel):
    """Settings of the adaptive explicit Runge-Kutta integrator."""

    rtol: float = Field(default=1e-9, gt=0)
    """Relative local error tolerance."""
    atol: float = Field(default=1e-12, gt=0)
    """Absolute local error tolerance."""
    max_step: float = Field(default=0.1, gt=0)
    """Upper bound on the step size."""
    project_to_sphere: bool = False
    """Rescale every accepted 4D step to unit norm. Only meaningful for sphere-invariant fields."""
    t_transient: float = Field(default=500.0, ge=0)
    """Time discarded before averaging starts (used by spectrum runs)."""
    sample_dt: float = Field(default=0.01, gt=0)
    """Spacing of the dense samples stored in a Trajectory."""
    method: Literal["RK45", "DOP853"] = "DOP853"
    """Embedded pair: "RK45" is Dormand-Prince 5(4), "DOP853" is Dormand-Prince 8(5,3)."""

    model_config = ConfigDict(frozen=True, extra="forbid")
