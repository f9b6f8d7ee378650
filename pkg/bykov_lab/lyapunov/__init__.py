from bykov_lab.lyapunov.classify import (
    CLASS_COLORS,
    AttractorClass,
    ColorName,
    class_for_count,
    classify,
    count_nonnegative,
)
from bykov_lab.lyapunov.spectrum import RADIAL_BOUND, SpectrumResult, TangentFrame, field_spectrum, spectrum

__all__ = [
    "CLASS_COLORS",
    "RADIAL_BOUND",
    "AttractorClass",
    "ColorName",
    "SpectrumResult",
    "TangentFrame",
    "class_for_count",
    "classify",
    "count_nonnegative",
    "field_spectrum",
    "spectrum",
]
