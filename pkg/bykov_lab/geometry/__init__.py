from bykov_lab.geometry.cycles import LimitCycle2D, find_limit_cycle, find_limit_cycle_2d, return_map
from bykov_lab.geometry.portrait import (
    hausdorff_half_split,
    hits_to_frame,
    portrait_to_csv,
    section_hits,
    section_portrait,
)
from bykov_lab.geometry.rotation import (
    ReturnSeries,
    RotationEstimate,
    continued_fraction,
    is_mode_locked,
    nearest_rational,
    rotation_number,
)

__all__ = [
    "LimitCycle2D",
    "ReturnSeries",
    "RotationEstimate",
    "continued_fraction",
    "find_limit_cycle",
    "find_limit_cycle_2d",
    "hausdorff_half_split",
    "hits_to_frame",
    "is_mode_locked",
    "nearest_rational",
    "portrait_to_csv",
    "return_map",
    "rotation_number",
    "section_hits",
    "section_portrait",
]
