import math
from typing import ClassVar

import numpy as np
import pytest
from numpy.typing import NDArray

from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.configs.model import ORBIT_START, ModelParams, ModelParamsDirectory
from bykov_lab.core.errors import NoCycleFound
from bykov_lab.core.state import State
from bykov_lab.core.vector_field import VectorField
from bykov_lab.geometry.cycles import find_limit_cycle, find_limit_cycle_2d, return_map
from bykov_lab.integrate.sections import FlowRun, SectionSpec, iter_crossings
from bykov_lab.model.field import FullSystem


class _Hopf(VectorField):
    """Normal form with the attracting circle r = 1, travelled once every 2π."""

    dim: ClassVar[int] = 2

    def evaluate(self, x: State) -> State:
        s = 1.0 - (x[0] * x[0] + x[1] * x[1])
        return np.array([x[0] * s - x[1], x[1] * s + x[0]])

    def jacobian(self, x: State) -> NDArray[np.float64]:
        s = 1.0 - (x[0] * x[0] + x[1] * x[1])
        return np.array(
            [
                [s - 2.0 * x[0] * x[0], -2.0 * x[0] * x[1] - 1.0],
                [-2.0 * x[0] * x[1] + 1.0, s - 2.0 * x[1] * x[1]],
            ]
        )


def test_hopf_cycle() -> None:
    cycle = find_limit_cycle(_Hopf(), [0.5, 0.0], 100.0, cfg=IntegratorConfig(rtol=1e-11, atol=1e-13))
    assert cycle.period == pytest.approx(2.0 * math.pi, abs=1e-7)
    np.testing.assert_allclose(cycle.section_point, [0.0, -1.0], atol=1e-8)
    # The true multiplier is exp(−4π) ≈ 3.5e-6.
    assert abs(cycle.floquet_estimate) < 0.01
    assert cycle.stable
    assert len(cycle.return_times) >= 2


def test_hopf_return_map() -> None:
    hit = return_map(_Hopf(), -1.0, 20.0, IntegratorConfig(rtol=1e-11, atol=1e-13))
    assert hit.t == pytest.approx(2.0 * math.pi, abs=1e-8)
    assert hit.state[1] == pytest.approx(-1.0, abs=1e-9)


def test_planar_cycle_with_broken_gamma2() -> None:
    cycle = find_limit_cycle_2d(ModelParamsDirectory.TORUS)
    assert cycle.stable
    assert cycle.period > 0.0
    assert max(cycle.return_times) - min(cycle.return_times) < 1e-6
    assert -1.0 < cycle.section_point[1] < 1.0


def test_no_cycle_without_tau1() -> None:
    # x3 = 0 is invariant, so the orbit never crosses the section.
    with pytest.raises(NoCycleFound):
        find_limit_cycle_2d(ModelParams(tau1=0.0), t_search=200.0, transient=0.0)


@pytest.mark.slow
def test_full_orbit_returns_match_planar_period() -> None:
    planar = find_limit_cycle_2d(ModelParamsDirectory.TORUS)
    run = FlowRun(FullSystem(ModelParamsDirectory.TORUS), ORBIT_START, 1500.0)
    times = [hit.t for hit in iter_crossings(run, SectionSpec.x3_rising())]
    late = np.diff(times)[-5:]
    np.testing.assert_allclose(late, planar.period, rtol=1e-5)


def test_planar_period_is_stable_under_tolerance_halving() -> None:
    cfg = IntegratorConfig()
    coarse = find_limit_cycle_2d(ModelParamsDirectory.TORUS, cfg=cfg)
    fine = find_limit_cycle_2d(
        ModelParamsDirectory.TORUS, cfg=cfg.model_copy(update={"rtol": cfg.rtol / 2, "atol": cfg.atol / 2})
    )
    assert abs(coarse.floquet_estimate) < 1.0
    assert fine.period == pytest.approx(coarse.period, abs=1e-6)
