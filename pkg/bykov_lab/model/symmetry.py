import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from bykov_lab.configs.model import ModelParams
from bykov_lab.core.errors import TangencyNotGuaranteed
from bykov_lab.core.state import State, as_state
from bykov_lab.model.field import eval_field_4d

GroupKind = Literal["rotation", "gamma2", "gammaPi"]


@dataclass(frozen=True)
class GroupElement:
    """An element of the symmetry group acting on ℝ⁴.

    `rotation` turns the (x1, x2) plane by `psi`, `gamma2` flips x3 and `gammaPi` flips x1 and x2.
    """

    kind: GroupKind
    psi: float = 0.0

    @classmethod
    def rotation(cls, psi: float) -> "GroupElement":
        return cls("rotation", psi)

    @classmethod
    def gamma2(cls) -> "GroupElement":
        return cls("gamma2")

    @classmethod
    def gamma_pi(cls) -> "GroupElement":
        return cls("gammaPi")

    def __str__(self) -> str:
        return f"rotation({self.psi:g})" if self.kind == "rotation" else self.kind


def group_apply(g: GroupElement, x: State) -> State:
    x1, x2, x3, x4 = (float(v) for v in as_state(x, 4))
    match g.kind:
        case "rotation":
            c, s = math.cos(g.psi), math.sin(g.psi)
            return np.array([c * x1 - s * x2, s * x1 + c * x2, x3, x4])
        case "gamma2":
            return np.array([x1, x2, -x3, x4])
        case "gammaPi":
            return np.array([-x1, -x2, x3, x4])
    raise ValueError(f"Unknown group element kind: {g.kind!r}")


def sample_sphere(n: int, seed: int, dim: int = 4) -> np.ndarray:
    """`n` seeded points distributed uniformly on the unit sphere in ℝ^dim, one per row."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    points = rng.standard_normal((n, dim))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def equivariance_defect(p: ModelParams, g: GroupElement, n_samples: int, seed: int) -> float:
    """max ‖f(g·x) − g·f(x)‖₂ over seeded points on the unit sphere."""
    worst = 0.0
    for x in sample_sphere(n_samples, seed):
        lhs = eval_field_4d(p, group_apply(g, x))
        rhs = group_apply(g, eval_field_4d(p, x))
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def sphere_tangency_defect(p: ModelParams, n_samples: int, seed: int) -> float:
    """max |⟨f(x), x⟩| over seeded points on the unit sphere.

    With kappa > 0 the value is still computed, but a `TangencyNotGuaranteed` warning is emitted.
    """
    if not p.sphere_invariant:
        warnings.warn(
            f"kappa={p.kappa} breaks the sphere invariance; the tangency defect is expected to be nonzero",
            TangencyNotGuaranteed,
            stacklevel=2,
        )
    worst = 0.0
    for x in sample_sphere(n_samples, seed):
        worst = max(worst, abs(float(np.dot(eval_field_4d(p, x), x))))
    return worst
