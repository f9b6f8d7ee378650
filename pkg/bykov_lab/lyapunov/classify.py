from collections.abc import Sequence
from typing import Literal

from pydantic import BaseModel, ConfigDict

from bykov_lab.core.errors import Unconverged
from bykov_lab.lyapunov.spectrum import SpectrumResult

ColorName = Literal["red", "blue", "yellow", "gray"]
Label = Literal["FixedPoint", "LimitCycle", "TorusOrChaos"]

CLASS_COLORS: dict[ColorName, tuple[int, int, int]] = {
    "red": (255, 0, 0),
    "blue": (0, 0, 255),
    "yellow": (255, 255, 0),
    "gray": (128, 128, 128),
}
"""Raster colors; gray marks cells whose spectrum failed."""

DEFAULT_ZERO_TOL = 0.01


class AttractorClass(BaseModel):
    label: Label
    nonneg_count: int
    """Exponents that are positive or within zero_tol of zero."""
    color: ColorName

    model_config = ConfigDict(frozen=True, extra="forbid")

    @property
    def rgb(self) -> tuple[int, int, int]:
        return CLASS_COLORS[self.color]


def count_nonnegative(exponents: Sequence[float], zero_tol: float) -> int:
    positive = sum(1 for v in exponents if v > zero_tol)
    zero = sum(1 for v in exponents if abs(v) <= zero_tol)
    return positive + zero


def class_for_count(nonneg_count: int) -> AttractorClass:
    if nonneg_count == 0:
        return AttractorClass(label="FixedPoint", nonneg_count=0, color="red")
    if nonneg_count == 1:
        return AttractorClass(label="LimitCycle", nonneg_count=1, color="blue")
    return AttractorClass(label="TorusOrChaos", nonneg_count=nonneg_count, color="yellow")


def classify(
    s: SpectrumResult | Sequence[float],
    zero_tol: float = DEFAULT_ZERO_TOL,
    *,
    allow_unconverged: bool = False,
) -> AttractorClass:
    """Attractor type from the number of non-negative on-sphere exponents.

    (−,−,−) is a sink, (0,−,−) a limit cycle, and (0,0,−) or (+,0,−) a torus or a strange
    attractor, which this rule does not tell apart. A bare sequence of exponents is taken as
    converged.
    """
    if isinstance(s, SpectrumResult):
        if not s.converged and not allow_unconverged:
            raise Unconverged(
                f"spectrum {s.exponents} varied by {s.tail_variation:.3g} over the last part of the run"
            )
        exponents: Sequence[float] = s.exponents
    else:
        exponents = s
    return class_for_count(count_nonnegative(exponents, zero_tol))
