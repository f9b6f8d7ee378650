import math

import numpy as np
import pytest

from bykov_lab.configs.model import ModelParams, ModelParamsDirectory
from bykov_lab.core.errors import TangencyNotGuaranteed
from bykov_lab.model.symmetry import (
    GroupElement,
    equivariance_defect,
    group_apply,
    sample_sphere,
    sphere_tangency_defect,
)

TAUS = [(t1, t2) for t1 in (0.0, 0.5, 1.0) for t2 in (0.0, 0.5, 1.0)]


def test_group_actions() -> None:
    x = np.array([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_array_equal(group_apply(GroupElement.gamma2(), x), [1.0, 2.0, -3.0, 4.0])
    np.testing.assert_array_equal(group_apply(GroupElement.gamma_pi(), x), [-1.0, -2.0, 3.0, 4.0])
    np.testing.assert_allclose(group_apply(GroupElement.rotation(math.pi / 2), x), [-2.0, 1.0, 3.0, 4.0], atol=1e-15)


def test_sample_sphere_is_seeded_and_normalized() -> None:
    a = sample_sphere(100, seed=1)
    np.testing.assert_array_equal(a, sample_sphere(100, seed=1))
    np.testing.assert_allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-15)
    assert sample_sphere(5, seed=1, dim=2).shape == (5, 2)


@pytest.mark.parametrize("psi", [0.3, 1.0, 2.5, 5.9])
@pytest.mark.parametrize("tau1", [0.0, 0.5, 1.0])
def test_so2_equivariance_without_tau2(psi: float, tau1: float) -> None:
    assert equivariance_defect(ModelParams(tau1=tau1), GroupElement.rotation(psi), 200, seed=4) < 1e-13


@pytest.mark.parametrize(("tau1", "tau2"), TAUS)
def test_gamma_pi_equivariance(tau1: float, tau2: float) -> None:
    assert equivariance_defect(ModelParams(tau1=tau1, tau2=tau2), GroupElement.gamma_pi(), 300, seed=4) < 1e-13


def test_gamma2_equivariance_at_organizing_center() -> None:
    p = ModelParamsDirectory.ORGANIZING_CENTER
    assert equivariance_defect(p, GroupElement.gamma2(), 300, seed=4) < 1e-13


def test_tau1_breaks_gamma2() -> None:
    assert equivariance_defect(ModelParamsDirectory.TORUS, GroupElement.gamma2(), 100, seed=4) > 1e-3


def test_tau2_breaks_rotation() -> None:
    p = ModelParams(tau1=0.3, tau2=0.3)
    assert equivariance_defect(p, GroupElement.rotation(1.0), 100, seed=4) > 1e-3


@pytest.mark.parametrize(("tau1", "tau2"), TAUS)
def test_sphere_tangency(tau1: float, tau2: float) -> None:
    assert sphere_tangency_defect(ModelParams(tau1=tau1, tau2=tau2), 2000, seed=9) < 1e-12


def test_kappa_breaks_tangency_with_warning() -> None:
    with pytest.warns(TangencyNotGuaranteed):
        defect = sphere_tangency_defect(ModelParamsDirectory.ALL_BROKEN, 500, seed=9)
    assert defect > 1e-3
