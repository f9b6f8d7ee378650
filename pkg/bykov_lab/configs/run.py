import sys
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.configs.lyapunov import SpectrumSettings
from bykov_lab.configs.model import ORBIT_START, ModelParams
from bykov_lab.core.errors import ConfigError
from bykov_lab.sweep.grid import SweepSpec

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SECTIONS = ("model", "integrator", "lyapunov", "sweep")


class SweepSettings(BaseModel):
    """The `[sweep]` section: grid geometry, shared initial condition, workers and artifact paths."""

    tau1_range: tuple[float, float] = (0.0, 0.6)
    tau2_range: tuple[float, float] = (0.0, 0.6)
    n1: int = Field(default=40, ge=2)
    n2: int = Field(default=40, ge=2)
    x0: tuple[float, float, float, float] = ORBIT_START
    workers: int | None = Field(default=None, ge=1)
    """None means BYKOV_LAB_THREADS, or 1 if unset."""
    out: Path | None = None
    """Cell CSV; also the checkpoint a rerun resumes from."""
    image: Path | None = None
    """PPM raster written once the sweep is complete."""
    cache_dir: Path | None = None
    """Directory of a persistent spectrum cache shared between sweeps."""

    model_config = ConfigDict(frozen=True, extra="forbid")


class RunConfig(BaseModel):
    """Everything one CLI invocation needs, validated in full before any computation starts."""

    model: ModelParams = ModelParams()
    integrator: IntegratorConfig = IntegratorConfig()
    lyapunov: SpectrumSettings = SpectrumSettings()
    """Its `integrator` is always the top-level `integrator` section."""
    sweep: SweepSettings = SweepSettings()

    model_config = ConfigDict(frozen=True, extra="forbid")

    @classmethod
    def from_sections(cls, sections: Mapping[str, Mapping[str, Any]]) -> "RunConfig":
        unknown = sorted(set(sections) - set(SECTIONS))
        if unknown:
            raise ConfigError(f"Unknown config section(s) {unknown}; expected a subset of {list(SECTIONS)}")
        for name, values in sections.items():
            if not isinstance(values, Mapping):
                raise ConfigError(f"[{name}] must be a table of key = value lines")
        lyapunov = dict(sections.get("lyapunov", {}))
        if "integrator" in lyapunov:
            raise ConfigError("Set integrator options under [integrator], not [lyapunov]")
        try:
            integrator = IntegratorConfig(**sections.get("integrator", {}))
            return cls(
                model=ModelParams(**sections.get("model", {})),
                integrator=integrator,
                lyapunov=SpectrumSettings(**lyapunov, integrator=integrator),
                sweep=SweepSettings(**sections.get("sweep", {})),
            )
        except ValidationError as e:
            raise ConfigError(str(e)) from e

    @classmethod
    def from_toml(
        cls, path: str | Path | None = None, overrides: Mapping[str, Mapping[str, Any]] | None = None
    ) -> "RunConfig":
        """Load a config file and apply `overrides` (flag values; None means unset) on top of it."""
        sections: dict[str, dict[str, Any]] = {}
        if path is not None:
            try:
                with open(path, "rb") as f:
                    loaded = tomllib.load(f)
            except OSError as e:
                raise ConfigError(f"Cannot read config {path}: {e}") from e
            except tomllib.TOMLDecodeError as e:
                raise ConfigError(f"Invalid TOML in {path}: {e}") from e
            sections = {k: dict(v) if isinstance(v, dict) else v for k, v in loaded.items()}
        for name, values in (overrides or {}).items():
            present = {k: v for k, v in values.items() if v is not None}
            if present:
                sections.setdefault(name, {}).update(present)
        return cls.from_sections(sections)

    def sweep_spec(self) -> SweepSpec:
        try:
            return SweepSpec(
                tau1_range=self.sweep.tau1_range,
                tau2_range=self.sweep.tau2_range,
                n1=self.sweep.n1,
                n2=self.sweep.n2,
                alpha=self.model.alpha,
                beta=self.model.beta,
                omega=self.model.omega,
                kappa=self.model.kappa,
                x0=self.sweep.x0,
                lyapunov=self.lyapunov,
            )
        except ValidationError as e:
            raise ConfigError(str(e)) from e
