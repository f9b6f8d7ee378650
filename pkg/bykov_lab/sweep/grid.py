import math
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Self

from bykov_lab.configs.lyapunov import SpectrumSettings
from bykov_lab.configs.model import ORBIT_START, ModelParams
from bykov_lab.lyapunov.classify import ColorName
from bykov_lab.lyapunov.spectrum import SpectrumResult

CellIndex = tuple[int, int]


class SweepSpec(BaseModel):
    """A rectangular grid over the (tau1, tau2) plane with everything else held fixed."""

    tau1_range: tuple[float, float] = (0.0, 0.6)
    tau2_range: tuple[float, float] = (0.0, 0.6)
    n1: int = Field(default=40, ge=2)
    """Number of tau1 values (image width)."""
    n2: int = Field(default=40, ge=2)
    """Number of tau2 values (image height)."""
    alpha: float = 1.0
    beta: float = -0.1
    omega: float = 1.0
    kappa: float = 0.0
    x0: tuple[float, float, float, float] = ORBIT_START
    """Initial condition near W^u(O2), shared by every cell."""
    lyapunov: SpectrumSettings = SpectrumSettings()

    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="after")
    def _check_ranges(self) -> Self:
        for name, (lo, hi) in (("tau1_range", self.tau1_range), ("tau2_range", self.tau2_range)):
            if not 0.0 <= lo < hi <= 1.0:
                raise ValueError(f"{name}={(lo, hi)} must satisfy 0 <= lo < hi <= 1")
        self.base_params()
        return self

    def base_params(self) -> ModelParams:
        return ModelParams(alpha=self.alpha, beta=self.beta, omega=self.omega, kappa=self.kappa)

    @property
    def tau1_values(self) -> NDArray[np.float64]:
        return np.linspace(self.tau1_range[0], self.tau1_range[1], self.n1)

    @property
    def tau2_values(self) -> NDArray[np.float64]:
        return np.linspace(self.tau2_range[0], self.tau2_range[1], self.n2)

    def taus_at(self, i: int, j: int) -> tuple[float, float]:
        return float(self.tau1_values[i]), float(self.tau2_values[j])

    def params_at(self, i: int, j: int) -> ModelParams:
        return self.base_params().with_taus(*self.taus_at(i, j))

    def cell_order(self) -> Iterator[CellIndex]:
        """All cells ordered by (tau2, tau1), the row order of the CSV."""
        for j in range(self.n2):
            for i in range(self.n1):
                yield i, j

    @property
    def n_cells(self) -> int:
        return self.n1 * self.n2


class CellResult(BaseModel):
    """Outcome of one grid cell; failed cells are gray and keep whatever spectrum was computed."""

    i: int
    j: int
    tau1: float
    tau2: float
    exponents: tuple[float, float, float] = (math.nan, math.nan, math.nan)
    radial: float = math.nan
    nonneg: int = -1
    """Non-negative exponent count, or −1 when no spectrum is available."""
    color: ColorName
    error: str | None = None

    model_config = ConfigDict(frozen=True, extra="forbid")

    @classmethod
    def from_spectrum(
        cls,
        i: int,
        j: int,
        tau1: float,
        tau2: float,
        s: SpectrumResult,
        nonneg: int,
        color: ColorName,
        error: str | None = None,
    ) -> "CellResult":
        e = (*s.exponents, math.nan, math.nan, math.nan)
        return cls(
            i=i,
            j=j,
            tau1=tau1,
            tau2=tau2,
            exponents=(e[0], e[1], e[2]),
            radial=s.radial_exponent,
            nonneg=nonneg,
            color=color,
            error=error,
        )

    @property
    def index(self) -> CellIndex:
        return self.i, self.j


@dataclass
class SweepGrid:
    """Results of a sweep, possibly partial. The grid geometry is that of `spec`."""

    spec: SweepSpec
    cells: dict[CellIndex, CellResult] = field(default_factory=dict)

    def add(self, cell: CellResult) -> None:
        if not (0 <= cell.i < self.spec.n1 and 0 <= cell.j < self.spec.n2):
            raise IndexError(f"Cell {cell.index} lies outside the {self.spec.n1}x{self.spec.n2} grid")
        self.cells[cell.index] = cell

    def is_done(self, i: int, j: int) -> bool:
        return (i, j) in self.cells

    @property
    def done_count(self) -> int:
        return len(self.cells)

    @property
    def complete(self) -> bool:
        return self.done_count == self.spec.n_cells

    def pending(self) -> list[CellIndex]:
        return [ij for ij in self.spec.cell_order() if ij not in self.cells]

    def sorted_cells(self) -> list[CellResult]:
        return [self.cells[ij] for ij in self.spec.cell_order() if ij in self.cells]

    def color_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for cell in self.cells.values():
            counts[cell.color] = counts.get(cell.color, 0) + 1
        return counts
