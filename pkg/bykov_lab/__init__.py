import importlib.metadata

try:
    __version__ = importlib.metadata.version("bykov-lab")
except importlib.metadata.PackageNotFoundError:
    __version__ = "0.0.0"  # Fallback for development mode


from bykov_lab.configs import IntegratorConfig, ModelParams, ModelParamsDirectory, SpectrumSettings
from bykov_lab.core import VectorField
from bykov_lab.integrate import SectionSpec, Trajectory, detect_crossings, integrate
from bykov_lab.lyapunov import AttractorClass, SpectrumResult, classify, spectrum
from bykov_lab.model import FullSystem, PlanarSystem, QuotientSystem, derived_constants
from bykov_lab.sweep import SweepGrid, SweepSpec, run_sweep

__all__ = [
    "AttractorClass",
    "FullSystem",
    "IntegratorConfig",
    "ModelParams",
    "ModelParamsDirectory",
    "PlanarSystem",
    "QuotientSystem",
    "SectionSpec",
    "SpectrumResult",
    "SpectrumSettings",
    "SweepGrid",
    "SweepSpec",
    "Trajectory",
    "VectorField",
    "__version__",
    "classify",
    "derived_constants",
    "detect_crossings",
    "integrate",
    "run_sweep",
    "spectrum",
]
