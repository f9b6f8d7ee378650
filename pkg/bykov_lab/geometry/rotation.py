import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.stats import linregress

from bykov_lab.core.errors import InsufficientData
from bykov_lab.integrate.sections import SectionHit

MIN_HITS = 10


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    """Successive section hits and their unwrapped phase."""

    hits: tuple[SectionHit, ...]
    angles: NDArray[np.float64]
    """θ_i, unwrapped so consecutive values differ by less than π."""
    center: tuple[float, float] | None = None

    @classmethod
    def from_hits(
        cls,
        hits: Sequence[SectionHit],
        coords: tuple[int, int] = (2, 3),
        center: tuple[float, float] | None = None,
    ) -> "ReturnSeries":
        """Phase θ = atan2(a − c_a, b − c_b) of the coordinate pair (a, b) around `center`.

        The center defaults to the centroid of the hits.
        """
        if not hits:
            return cls(hits=(), angles=np.empty(0), center=center)
        points = np.array([[h.state[coords[0]], h.state[coords[1]]] for h in hits])
        if center is None:
            c = points.mean(axis=0)
            center = (float(c[0]), float(c[1]))
        angles = np.arctan2(points[:, 0] - center[0], points[:, 1] - center[1])
        return cls(hits=tuple(hits), angles=np.unwrap(angles), center=center)

    @classmethod
    def from_angles(cls, angles: ArrayLike) -> "ReturnSeries":
        return cls(hits=(), angles=np.unwrap(np.asarray(angles, dtype=np.float64)))

    def __len__(self) -> int:
        return len(self.angles)


class RotationEstimate(NamedTuple):
    estimate: float
    """Mean phase advance per return in turns, reduced to [0, 1)."""
    stderr: float


def rotation_number(rs: ReturnSeries) -> RotationEstimate:
    """Least-squares slope of θ_i against i, in turns per return."""
    if len(rs) < MIN_HITS:
        raise InsufficientData(f"A rotation number needs at least {MIN_HITS} returns, got {len(rs)}.")
    fit = linregress(np.arange(len(rs), dtype=np.float64), rs.angles)
    turns = float(fit.slope) / (2.0 * math.pi)
    estimate = turns - math.floor(turns)
    if estimate >= 1.0:
        estimate = 0.0
    return RotationEstimate(estimate, float(fit.stderr) / (2.0 * math.pi))


def nearest_rational(x: float, max_denominator: int = 20) -> Fraction:
    return Fraction(x).limit_denominator(max_denominator)


def continued_fraction(x: float, n_terms: int = 12, eps: float = 1e-12) -> list[int]:
    """Leading partial quotients [a0; a1, a2, …] of x. Stops early once the remainder vanishes."""
    terms = []
    for _ in range(n_terms):
        a = math.floor(x)
        terms.append(a)
        frac = x - a
        if frac < eps:
            break
        x = 1.0 / frac
    return terms


def is_mode_locked(estimate: float, stderr: float, max_denominator: int = 20) -> bool:
    """Whether the rotation number lies within three standard errors of a rational p/q, q ≤ max_denominator."""
    q = nearest_rational(estimate, max_denominator)
    return abs(estimate - float(q)) <= 3.0 * stderr + 1e-12
