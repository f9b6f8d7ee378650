from typing import TYPE_CHECKING, Any

import numpy as np
from numpy.typing import NDArray

if TYPE_CHECKING:
    from bykov_lab.lyapunov.spectrum import SpectrumResult


class BykovLabError(Exception):
    """Base class for all errors raised by bykov_lab."""


class ConfigError(BykovLabError, ValueError):
    """A configuration file or flag set could not be turned into a valid RunConfig."""


class QuotientInvalid(BykovLabError, ValueError):
    """The SO(2) quotient was requested for parameters that break the SO(2) symmetry."""


class DomainError(BykovLabError, ValueError):
    """An argument lies outside the domain of a formula."""


class IntegrationStalled(BykovLabError, RuntimeError):
    """The adaptive step size underflowed."""

    def __init__(self, message: str, *, t: float, state: NDArray[np.float64]):
        super().__init__(f"{message} (t={t!r})")
        self.t = t
        self.state = state
        """Last accepted state before the stall."""


class NumericalBlowup(BykovLabError, RuntimeError):
    """A NaN or an infinity appeared in the integrated state."""

    def __init__(self, t: float):
        super().__init__(f"non-finite state at t={t!r}")
        self.t = t


class RadialAnomaly(BykovLabError, RuntimeError):
    """The discarded radial exponent is not clearly negative, so the on-sphere spectrum is suspect."""

    def __init__(self, result: "SpectrumResult", bound: float):
        super().__init__(f"radial exponent {result.radial_exponent!r} is not below {bound!r}")
        self.result = result


class Unconverged(BykovLabError, RuntimeError):
    """A spectrum did not settle within the convergence tolerance."""


class InsufficientData(BykovLabError, ValueError):
    """Too few samples to compute a statistic."""


class NoCycleFound(BykovLabError, RuntimeError):
    """No recurrent section point was found within the search time."""


class ParseError(BykovLabError, ValueError):
    """A CSV artifact could not be parsed."""

    def __init__(self, message: str, *, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class TangencyNotGuaranteed(UserWarning):
    """The perturbation amplitude kappa is nonzero, so the field need not be tangent to the sphere."""


def describe_error(e: BaseException | Any) -> str:
    if isinstance(e, BaseException):
        return f"{type(e).__name__}: {e}"
    return str(e)
