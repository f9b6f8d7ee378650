from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self


class ModelParams(BaseModel):
    """Coefficients of the equivariant vector field on the 3-sphere.

    Construction is the only place where the parameter constraints are checked;
    every evaluation routine assumes a valid instance.
    """

    alpha: float = Field(default=1.0, gt=0)
    """Rate of the quadratic terms; alpha > 0."""
    beta: float = Field(default=-0.1, lt=0)
    """Rate of the cubic terms; beta < 0 and |beta| < alpha."""
    omega: float = Field(default=1.0, gt=0)
    """Angular speed of the rotation in the (x1, x2) plane."""
    tau1: float = Field(default=0.0, ge=0, le=1)
    """Breaks the Z2(gamma2) symmetry."""
    tau2: float = Field(default=0.0, ge=0, le=1)
    """Breaks SO(2)(gamma_psi) down to Z2(gamma_pi)."""
    kappa: float = Field(default=0.0, ge=0)
    """Amplitude of the term (x1x3x4, -x1x2², x3³, -x1x3x4) that breaks every symmetry and the sphere invariance."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _check_rates(self) -> Self:
        if not self.beta * self.beta < 8.0 * self.alpha * self.alpha:
            raise ValueError(f"beta² must be smaller than 8·alpha² (alpha={self.alpha}, beta={self.beta})")
        if not abs(self.beta) < abs(self.alpha):
            raise ValueError(f"|beta| must be smaller than |alpha| (alpha={self.alpha}, beta={self.beta})")
        return self

    @property
    def sphere_invariant(self) -> bool:
        return self.kappa == 0.0

    def with_taus(self, tau1: float, tau2: float) -> "ModelParams":
        """Return a copy at another point of the (tau1, tau2) plane."""
        return ModelParams(alpha=self.alpha, beta=self.beta, omega=self.omega, tau1=tau1, tau2=tau2, kappa=self.kappa)


class ModelParamsDirectory:
    """Named parameter points of the torus-breakdown scenario."""

    @classmethod
    def list_all(cls) -> list[ModelParams]:
        presets: list[ModelParams] = []
        for name, value in vars(cls).items():
            if name.isupper():
                presets.extend(value if isinstance(value, tuple) else [value])
        return presets

    ORGANIZING_CENTER = ModelParams(alpha=1.0, beta=-0.1, omega=1.0, tau1=0.0, tau2=0.0)
    """Attracting heteroclinic network between O1 and O2."""

    TORUS = ModelParams(alpha=1.0, beta=-0.1, omega=1.0, tau1=0.5, tau2=0.0)
    """Z2(gamma2) broken: an attracting invariant two-torus."""

    TORUS_BREAKDOWN = tuple(
        ModelParams(alpha=1.0, beta=-0.1, omega=1.0, tau1=0.3, tau2=tau2) for tau2 in (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)
    )
    """tau1 = 0.3 with increasing tau2: the invariant curve on the section breaks up."""

    SYMMETRY_TEST = ModelParams(alpha=1.0, beta=-0.1, omega=1.0, tau1=0.0, tau2=0.3)
    """tau1 = 0, tau2 > 0: the gamma2 equivariance is measured here."""

    ALL_BROKEN = ModelParams(alpha=1.0, beta=-0.1, omega=1.0, tau1=0.0, tau2=0.0, kappa=0.3)
    """Organizing center plus the term that breaks every symmetry and the sphere invariance."""


ORBIT_START = (0.1, 0.1, 0.0, -0.99)
"""Initial condition near W^u(O2) used for the bifurcation diagram and the section pictures."""

CONNECTION_START = (0.0, 0.0, 0.01, 0.99)
"""Initial condition on the invariant circle x1 = x2 = 0, near W^s(O1)."""

PLANAR_START = (0.0, -0.99)
"""Initial condition (x3, x4) of the planar reduced system."""
