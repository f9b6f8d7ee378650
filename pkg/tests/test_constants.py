import math

import numpy as np
import pytest

from bykov_lab.configs.model import ModelParams, ModelParamsDirectory
from bykov_lab.core.errors import DomainError
from bykov_lab.model.constants import (
    Regime,
    derived_constants,
    eigenvalue_formulas,
    h1_curve,
    h2_curve,
    predicted_regime,
    regime_for,
)
from bykov_lab.model.equilibria import equilibria, tangent_eigenvalues
from bykov_lab.model.field import eval_field_4d


def test_derived_constants_at_center() -> None:
    c = derived_constants(ModelParamsDirectory.ORGANIZING_CENTER)
    assert c.C1 == pytest.approx(1.1)
    assert c.E1 == pytest.approx(0.9)
    assert c.delta1 == pytest.approx(11 / 9)
    assert c.delta == pytest.approx((11 / 9) ** 2)
    assert c.Komega == pytest.approx(2 / 0.81)
    assert c.Komega == pytest.approx(2.4691, abs=1e-4)


def test_curves_at_center() -> None:
    k = derived_constants(ModelParamsDirectory.ORGANIZING_CENTER).Komega
    assert h1_curve(k) == pytest.approx(0.3754, abs=1e-4)
    assert h2_curve(k) == pytest.approx(0.9996, abs=1e-4)


@pytest.mark.parametrize("k", [1e-3, 0.01, 0.5, 2.0, 50.0, 1e3])
def test_h1_below_h2(k: float) -> None:
    assert 0.0 < h1_curve(k) < h2_curve(k) <= 1.0


def test_h2_does_not_overflow_for_small_komega() -> None:
    assert h2_curve(1e-6) == 1.0


@pytest.mark.parametrize("k", [0.0, -1.0, math.nan])
def test_curves_reject_nonpositive_komega(k: float) -> None:
    with pytest.raises(DomainError):
        h1_curve(k)
    with pytest.raises(DomainError):
        h2_curve(k)


def test_predicted_regime_bands() -> None:
    k = 2.0
    assert predicted_regime(k, 0.5 * h1_curve(k)) is Regime.TORUS
    assert predicted_regime(k, 0.5 * (h1_curve(k) + h2_curve(k))) is Regime.TRANSITION
    assert predicted_regime(k, 1.0) is Regime.HORSESHOE


def test_regime_for() -> None:
    assert regime_for(ModelParams(tau1=0.5, tau2=0.0)) is Regime.TORUS
    with pytest.raises(DomainError):
        regime_for(ModelParamsDirectory.ORGANIZING_CENTER)


def test_eigenvalues_match_formulas() -> None:
    p = ModelParamsDirectory.ORGANIZING_CENTER
    formulas = eigenvalue_formulas(p)
    for label, point in (("O1", [0.0, 0.0, 0.0, 1.0]), ("O2", [0.0, 0.0, 0.0, -1.0])):
        computed = tangent_eigenvalues(p, np.array(point))
        assert len(computed) == 3
        for expected in formulas[label]:
            assert np.min(np.abs(computed - expected)) < 1e-10
    with pytest.raises(DomainError):
        eigenvalue_formulas(ModelParamsDirectory.TORUS)


def test_equilibria_at_center_are_exact() -> None:
    found = equilibria(ModelParamsDirectory.ORGANIZING_CENTER)
    assert [e.label for e in found] == ["O1", "O2"]
    np.testing.assert_array_equal(found[0].state, [0.0, 0.0, 0.0, 1.0])
    np.testing.assert_array_equal(found[1].state, [0.0, 0.0, 0.0, -1.0])
    # The radial eigenvalue of an on-sphere equilibrium is −2.
    assert any(abs(ev + 2.0) < 1e-12 for ev in found[0].eigenvalues)


def test_equilibria_move_with_tau1() -> None:
    p = ModelParams(tau1=0.3)
    found = equilibria(p)
    assert len(found) == 2
    for e in found:
        # The continued equilibria stay on the invariant circle.
        assert np.max(np.abs(eval_field_4d(p, e.state))) < 1e-12
        assert e.state[0] == 0.0 and e.state[1] == 0.0
        assert np.hypot(e.state[2], e.state[3]) == pytest.approx(1.0)
        assert e.state[2] != 0.0
