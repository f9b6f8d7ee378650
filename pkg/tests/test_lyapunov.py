import math
from typing import ClassVar

import numpy as np
import pytest
from numpy.typing import NDArray

from bykov_lab.configs.integrator import IntegratorConfig
from bykov_lab.configs.lyapunov import SpectrumSettings
from bykov_lab.configs.model import ORBIT_START, ModelParamsDirectory
from bykov_lab.core.errors import RadialAnomaly
from bykov_lab.core.state import State
from bykov_lab.core.vector_field import VectorField
from bykov_lab.lyapunov.classify import classify, count_nonnegative
from bykov_lab.lyapunov.spectrum import TangentFrame, field_spectrum, spectrum

NO_TRANSIENT = IntegratorConfig(t_transient=0.0)


class _FrozenLinearization(VectorField):
    """A state that never moves with a fixed Jacobian: the exponents are the diagonal entries."""

    dim: ClassVar[int] = 4

    def __init__(self, rates: tuple[float, float, float, float]):
        self.rates = rates

    def evaluate(self, x: State) -> State:
        return np.zeros(4)

    def jacobian(self, x: State) -> NDArray[np.float64]:
        return np.diag(self.rates)


def test_frame_reorthonormalization() -> None:
    rng = np.random.default_rng(0)
    vectors = rng.standard_normal((4, 4))
    frame = TangentFrame(vectors.copy())
    growth = frame.reorthonormalize()
    assert frame.orthonormality_error() < 1e-14
    # Σ log|R_ii| = log|det|.
    assert float(np.sum(growth)) == pytest.approx(math.log(abs(np.linalg.det(vectors))), abs=1e-12)
    np.testing.assert_allclose(frame.log_sums, growth)
    assert TangentFrame.identity(4, 2).k == 2


def test_diagonal_oracle() -> None:
    settings = SpectrumSettings(T=50.0, integrator=NO_TRANSIENT)
    s = field_spectrum(_FrozenLinearization((-1.0, 0.2, -0.5, 0.0)), np.zeros(4), settings)
    np.testing.assert_allclose(s.exponents, [0.2, 0.0, -0.5], atol=1e-8)
    assert s.radial_exponent == pytest.approx(-1.0, abs=1e-8)
    assert s.mean_divergence == pytest.approx(-1.3, abs=1e-8)
    assert s.converged
    assert s.max_orthonormality_error < 1e-12
    assert s.T_total == 50.0 and s.t_transient == 0.0


def test_partial_frame_has_no_radial_exponent() -> None:
    settings = SpectrumSettings(T=50.0, n_vectors=2, integrator=NO_TRANSIENT)
    s = field_spectrum(_FrozenLinearization((-1.0, 0.2, -0.5, 0.0)), np.zeros(4), settings)
    np.testing.assert_allclose(s.exponents, [0.2, 0.0], atol=1e-8)
    assert math.isnan(s.radial_exponent)


def test_radial_anomaly_keeps_the_result() -> None:
    settings = SpectrumSettings(T=20.0, integrator=NO_TRANSIENT)
    vf = _FrozenLinearization((0.2, 0.0, -0.1, -0.3))
    with pytest.raises(RadialAnomaly) as info:
        field_spectrum(vf, np.zeros(4), settings)
    assert info.value.result.radial_exponent == pytest.approx(-0.3, abs=1e-8)
    s = field_spectrum(vf, np.zeros(4), settings, check_radial=False)
    assert s.radial_exponent == pytest.approx(-0.3, abs=1e-8)


def test_spectrum_at_o2() -> None:
    # At O2 the tangent linearization is (alpha+beta)·rotation on (x1, x2) and −(alpha−beta) on x3.
    settings = SpectrumSettings(T=100.0, integrator=NO_TRANSIENT)
    s = spectrum(ModelParamsDirectory.ORGANIZING_CENTER, (0.0, 0.0, 0.0, -1.0), settings)
    np.testing.assert_allclose(s.exponents, [0.9, 0.9, -1.1], atol=1e-7)
    assert s.radial_exponent == pytest.approx(-2.0, abs=1e-7)
    assert s.positive_hint
    assert s.final_state == (0.0, 0.0, 0.0, -1.0)


def test_exponent_sum_equals_mean_divergence() -> None:
    settings = SpectrumSettings(T=60.0, integrator=IntegratorConfig(t_transient=10.0))
    s = spectrum(ModelParamsDirectory.TORUS, ORBIT_START, settings)
    assert s.exponent_sum == pytest.approx(s.mean_divergence, abs=1e-6)
    assert s.radial_exponent < -1.0
    assert len(s.raw_exponents) == 4
    assert list(s.raw_exponents) == sorted(s.raw_exponents, reverse=True)
    assert abs(np.linalg.norm(s.final_state) - 1.0) < 1e-14


def test_spectrum_is_deterministic() -> None:
    settings = SpectrumSettings(T=30.0, integrator=IntegratorConfig(t_transient=5.0))
    a = spectrum(ModelParamsDirectory.TORUS, ORBIT_START, settings)
    b = spectrum(ModelParamsDirectory.TORUS, ORBIT_START, settings)
    assert a == b


def test_settings_validation() -> None:
    with pytest.raises(ValueError):
        SpectrumSettings(T=100.0, integrator=IntegratorConfig(t_transient=500.0))
    with pytest.raises(ValueError):
        SpectrumSettings(n_vectors=5)


@pytest.mark.slow
def test_torus_spectrum() -> None:
    s = spectrum(ModelParamsDirectory.TORUS)
    zero_tol = SpectrumSettings().zero_tol
    assert count_nonnegative(s.exponents, zero_tol) == 2
    assert abs(s.exponents[0]) < zero_tol and abs(s.exponents[1]) < zero_tol
    assert s.exponents[2] < -zero_tol
    assert s.radial_exponent == pytest.approx(-2.0, abs=0.1)
    assert not s.positive_hint
    assert s.converged
    assert classify(s, zero_tol).color == "yellow"


def test_exponents_do_not_depend_on_the_reorthonormalization_interval() -> None:
    coarse = SpectrumSettings(T=300.0, gs_interval=0.5, integrator=IntegratorConfig(t_transient=50.0))
    fine = coarse.model_copy(update={"gs_interval": 0.25})
    a = spectrum(ModelParamsDirectory.TORUS, ORBIT_START, coarse)
    b = spectrum(ModelParamsDirectory.TORUS, ORBIT_START, fine)
    np.testing.assert_allclose(b.exponents, a.exponents, rtol=0, atol=2 * coarse.zero_tol)


@pytest.mark.slow
def test_orbit_on_the_invariant_circle_inherits_the_o2_rates() -> None:
    # Starts next to O1 on x1 = x2 = 0 and slides along the circle into O2.
    s = spectrum(ModelParamsDirectory.ORGANIZING_CENTER, (0.0, 0.0, 0.01, 0.99), SpectrumSettings(T=2000.0))
    np.testing.assert_allclose(s.exponents, [0.9, 0.9, -1.1], atol=0.05)
    np.testing.assert_allclose(s.final_state, (0.0, 0.0, 0.0, -1.0), atol=1e-9)
