from bykov_lab.integrate.sections import (
    FlowRun,
    SectionHit,
    SectionSpec,
    detect_crossings,
    iter_crossings,
)
from bykov_lab.integrate.stepper import AcceptedStep, flow_map, iter_rhs_steps, iter_steps, sphere_renormalizer
from bykov_lab.integrate.trajectory import FLOAT_FORMAT, Trajectory, integrate, sample_times, write_csv

__all__ = [
    "FLOAT_FORMAT",
    "AcceptedStep",
    "FlowRun",
    "SectionHit",
    "SectionSpec",
    "Trajectory",
    "detect_crossings",
    "flow_map",
    "integrate",
    "iter_crossings",
    "iter_rhs_steps",
    "iter_steps",
    "sample_times",
    "sphere_renormalizer",
    "write_csv",
]
