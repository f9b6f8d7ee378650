import math
from enum import Enum

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict

from bykov_lab.configs.model import ModelParams
from bykov_lab.core.errors import DomainError


class DerivedConstants(BaseModel):
    """Linearization rates, saddle values and twisting numbers of the organizing center."""

    C1: float
    """Contracting rate at O1 (real part of the complex pair), alpha − beta."""
    C2: float
    """Contracting rate at O2 (real eigenvalue), alpha − beta."""
    E1: float
    """Expanding rate at O1 (real eigenvalue), alpha + beta."""
    E2: float
    """Expanding rate at O2 (real part of the complex pair), alpha + beta."""
    delta1: float
    delta2: float
    delta: float
    """Product of the two saddle values; > 1 makes the network attracting."""
    K: float
    Komega: float
    """Twisting number 2·alpha·omega/(alpha + beta)²."""

    model_config = ConfigDict(frozen=True, extra="forbid")


class Regime(str, Enum):
    TORUS = "Torus"
    TRANSITION = "Transition"
    HORSESHOE = "Horseshoe"


def derived_constants(p: ModelParams) -> DerivedConstants:
    c = p.alpha - p.beta
    e = p.alpha + p.beta
    delta1 = c / e
    constants = DerivedConstants(
        C1=c,
        C2=c,
        E1=e,
        E2=e,
        delta1=delta1,
        delta2=delta1,
        delta=delta1 * delta1,
        K=2.0 * p.alpha / (e * e),
        Komega=2.0 * p.alpha * p.omega / (e * e),
    )
    # Guaranteed by the ModelParams validators.
    assert constants.delta1 > 1.0 and constants.Komega > 0.0, constants
    return constants


def eigenvalue_formulas(p: ModelParams) -> dict[str, NDArray[np.complex128]]:
    """Closed-form eigenvalues of the on-sphere linearization at O1 and O2.

    O1 has −(alpha−beta) ± omega·i and alpha+beta; O2 has (alpha+beta) ± omega·i and −(alpha−beta).
    Valid while O1 and O2 are equilibria, i.e. for tau1 = 0.
    """
    if p.tau1 != 0.0:
        raise DomainError(f"O1 and O2 are equilibria only for tau1 = 0, got tau1={p.tau1}")
    c = p.alpha - p.beta
    e = p.alpha + p.beta
    return {
        "O1": np.array([complex(-c, p.omega), complex(-c, -p.omega), complex(e, 0.0)]),
        "O2": np.array([complex(e, p.omega), complex(e, -p.omega), complex(-c, 0.0)]),
    }


def _check_komega(k: float) -> None:
    if not k > 0.0 or math.isnan(k):
        raise DomainError(f"Komega must be positive, got {k!r}")


def h1_curve(k: float) -> float:
    """Lower regime boundary 1/√(1 + Komega²)."""
    _check_komega(k)
    return 1.0 / math.hypot(1.0, k)


def h2_curve(k: float) -> float:
    """Upper regime boundary (e^{6π/K} − 1)/(e^{6π/K} − 1/6), evaluated in the overflow-free form."""
    _check_komega(k)
    u = math.exp(-6.0 * math.pi / k)
    return -math.expm1(-6.0 * math.pi / k) / (1.0 - u / 6.0)


def predicted_regime(k: float, ratio: float) -> Regime:
    """Torus below h1, horseshoe above h2, transition in between; `ratio` stands for tau2/tau1."""
    if ratio < h1_curve(k):
        return Regime.TORUS
    if ratio > h2_curve(k):
        return Regime.HORSESHOE
    return Regime.TRANSITION


def regime_for(p: ModelParams) -> Regime:
    if p.tau1 == 0.0:
        raise DomainError("The regime ratio tau2/tau1 is undefined for tau1 = 0")
    return predicted_regime(derived_constants(p).Komega, p.tau2 / p.tau1)
