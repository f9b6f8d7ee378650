from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from scipy.spatial.distance import directed_hausdorff

from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.configs.model import ModelParams
from bykov_lab.core.errors import InsufficientData
from bykov_lab.core.state import COORD_NAMES, as_state
from bykov_lab.core.vector_field import VectorField
from bykov_lab.integrate.sections import DEFAULT_REFINE_TOL, FlowRun, SectionHit, SectionSpec, detect_crossings
from bykov_lab.integrate.trajectory import write_csv
from bykov_lab.model.field import system_for

PORTRAIT_COLUMNS = ["t", "x3", "x4"]


def hits_to_frame(hits: Sequence[SectionHit], dim: int) -> pd.DataFrame:
    names = COORD_NAMES[dim]
    i3, i4 = names.index("x3"), names.index("x4")
    return pd.DataFrame(
        {
            "t": [h.t for h in hits],
            "x3": [float(h.state[i3]) for h in hits],
            "x4": [float(h.state[i4]) for h in hits],
        },
        columns=PORTRAIT_COLUMNS,
    )


def section_hits(
    source: ModelParams | VectorField,
    x0: ArrayLike,
    t_end: float,
    s: SectionSpec | None = None,
    cfg: IntegratorConfig | None = None,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> list[SectionHit]:
    y0 = as_state(x0)
    vf = system_for(source, len(y0)) if isinstance(source, ModelParams) else source
    return detect_crossings(FlowRun(vf, y0, t_end, cfg or IntegratorConfig()), s or SectionSpec.default(), refine_tol)


def section_portrait(
    source: ModelParams | VectorField,
    x0: ArrayLike,
    t_end: float,
    s: SectionSpec | None = None,
    cfg: IntegratorConfig | None = None,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> pd.DataFrame:
    """(t, x3, x4) of every section hit of the orbit through x0, the default section being x2 = 0, x1 > 0."""
    hits = section_hits(source, x0, t_end, s, cfg, refine_tol)
    return hits_to_frame(hits, len(as_state(x0)))


def portrait_to_csv(df: pd.DataFrame, path: str | Path) -> None:
    write_csv(df[PORTRAIT_COLUMNS], path)


def hausdorff_half_split(points: ArrayLike) -> float:
    """Symmetric Hausdorff distance between the first and the second half of a point sequence.

    Small values mean the later hits revisit the set traced by the earlier ones, as for points
    filling a closed invariant curve.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or len(pts) < 2:
        raise InsufficientData(f"Need at least two points, got {len(pts)}")
    half = len(pts) // 2
    first, second = pts[:half], pts[half:]
    return max(directed_hausdorff(first, second)[0], directed_hausdorff(second, first)[0])
