from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from bykov_lab.configs.integrator import IntegratorConfig


class SpectrumSettings(BaseModel):
    """Settings of a Lyapunov spectrum run.

    The defaults keep one parameter point to a few seconds while the classification stays stable
    across the (tau1, tau2) grid.
    """

    T: float = Field(default=3750.0, gt=0)
    """Total integration time, transient included."""
    gs_interval: float = Field(default=0.5, gt=0)
    """Time between reorthonormalizations of the tangent frame."""
    zero_tol: float = Field(default=0.01, gt=0)
    """Exponents with |λ| <= zero_tol count as zero."""
    convergence_tol: float = Field(default=0.005, gt=0)
    """A spectrum is converged when no exponent moved more than this over the last 10% of the run."""
    n_vectors: int = Field(default=4, ge=1, le=4)
    """Number of tangent vectors carried by the variational flow."""
    integrator: IntegratorConfig = IntegratorConfig()
    """Integrator settings; `t_transient` is the discarded transient."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _check_span(self) -> Self:
        if not self.T > self.integrator.t_transient:
            raise ValueError(f"T={self.T} must exceed the transient {self.integrator.t_transient}")
        return self

    @property
    def t_transient(self) -> float:
        return self.integrator.t_transient
