"""Machine-precision identities of the model, run as one report.

Every check compares an implemented quantity with something computed independently: exact
rational re-evaluation, high-precision decimals, finite differences or closed forms.
"""

import logging
import math
from collections.abc import Callable, Sequence
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict
from tabulate import tabulate

from bykov_lab.configs.model import ModelParams, ModelParamsDirectory
from bykov_lab.model.constants import derived_constants, eigenvalue_formulas, h1_curve, h2_curve
from bykov_lab.model.equilibria import tangent_eigenvalues
from bykov_lab.model.field import (
    eval_field_2d,
    eval_field_3d,
    eval_field_4d,
    eval_jacobian_2d,
    eval_jacobian_3d,
    eval_jacobian_4d,
)
from bykov_lab.model.symmetry import GroupElement, equivariance_defect, sample_sphere, sphere_tangency_defect

_logger = logging.getLogger(__name__)

TAU_GRID = (0.0, 0.5, 1.0)
FD_STEP = 1e-6

# 50 digits of π for the decimal reference of h2.
_PI = Decimal("3.14159265358979323846264338327950288419716939937511")


class Check(BaseModel):
    name: str
    value: float
    threshold: float
    passed: bool | None
    """None for measurements that are reported but never asserted."""
    asserted: bool = True

    model_config = ConfigDict(frozen=True, extra="forbid")


def _at_most(name: str, value: float, threshold: float) -> Check:
    return Check(name=name, value=value, threshold=threshold, passed=bool(value <= threshold))


def _above(name: str, value: float, threshold: float) -> Check:
    return Check(name=name, value=value, threshold=threshold, passed=bool(value > threshold))


def _measured(name: str, value: float) -> Check:
    return Check(name=name, value=value, threshold=math.nan, passed=None, asserted=False)


def _param_grid(**fixed: float) -> list[ModelParams]:
    return [ModelParams(tau1=t1, tau2=t2, **fixed) for t1 in TAU_GRID for t2 in TAU_GRID]


def exact_field_4d(p: ModelParams, x: Sequence[float]) -> list[Fraction]:
    """The full field in exact rational arithmetic, from the binary values of p and x."""
    x1, x2, x3, x4 = (Fraction(v) for v in x)
    a, b, w = Fraction(p.alpha), Fraction(p.beta), Fraction(p.omega)
    t1, t2, k = Fraction(p.tau1), Fraction(p.tau2), Fraction(p.kappa)
    s = 1 - (x1**2 + x2**2 + x3**2 + x4**2)
    return [
        x1 * s - w * x2 - a * x1 * x4 + b * x1 * x4**2 + t2 * x1 * x3 * x4 + k * x1 * x3 * x4,
        x2 * s + w * x1 - a * x2 * x4 + b * x2 * x4**2 - k * x1 * x2**2,
        x3 * s + a * x3 * x4 + b * x3 * x4**2 + t1 * x4**3 - t2 * x1**2 * x4 + k * x3**3,
        x4 * s
        - a * (x3**2 - x1**2 - x2**2)
        - b * x4 * (x1**2 + x2**2 + x3**2)
        - t1 * x3 * x4**2
        - k * x1 * x3 * x4,
    ]


def _max_fd_error(
    fun: Callable[[np.ndarray], np.ndarray], jac: Callable[[np.ndarray], np.ndarray], points: np.ndarray
) -> float:
    worst = 0.0
    for x in points:
        analytic = jac(x)
        for col in range(len(x)):
            e = np.zeros(len(x))
            e[col] = FD_STEP
            fd = (fun(x + e) - fun(x - e)) / (2.0 * FD_STEP)
            worst = max(worst, float(np.max(np.abs(analytic[:, col] - fd))))
    return worst


def _eigen_mismatch(computed: np.ndarray, expected: np.ndarray) -> float:
    return max(float(np.min(np.abs(computed - e))) for e in expected)


def _decimal_curves(k: float) -> tuple[Decimal, Decimal]:
    with localcontext() as ctx:
        ctx.prec = 50
        kd = Decimal(k)
        h1 = 1 / (1 + kd * kd).sqrt()
        e = (6 * _PI / kd).exp()
        h2 = (e - 1) / (e - Decimal(1) / 6)
    return h1, h2


def run_validation(seed: int = 7, n_tangency: int = 10_000) -> list[Check]:
    checks: list[Check] = []
    o1, o2 = np.array([0.0, 0.0, 0.0, 1.0]), np.array([0.0, 0.0, 0.0, -1.0])

    # Equilibria and the invariant circle.
    at_center = [ModelParams(tau2=t2, kappa=k) for t2 in TAU_GRID for k in (0.0, 0.3)]
    checks.append(
        _at_most(
            "f(O1) = f(O2) = 0 at tau1 = 0",
            max(float(np.max(np.abs(eval_field_4d(p, o)))) for p in at_center for o in (o1, o2)),
            0.0,
        )
    )
    rng = np.random.default_rng(seed)
    circle_points = np.column_stack([np.zeros((100, 2)), rng.uniform(-1.5, 1.5, (100, 2))])
    checks.append(
        _at_most(
            "x1 = x2 = 0 is invariant",
            max(
                float(np.max(np.abs(eval_field_4d(p, x)[:2])))
                for p in _param_grid(kappa=0.3)
                for x in circle_points
            ),
            0.0,
        )
    )

    # Symmetry ledger.
    angles = rng.uniform(0.0, 2.0 * math.pi, 20)
    so2 = [ModelParams(tau1=t1) for t1 in TAU_GRID]
    checks.append(
        _at_most(
            "SO(2) equivariance, tau2 = 0",
            max(equivariance_defect(p, GroupElement.rotation(float(psi)), 200, seed) for p in so2 for psi in angles),
            1e-13,
        )
    )
    checks.append(
        _at_most(
            "gammaPi equivariance",
            max(equivariance_defect(p, GroupElement.gamma_pi(), 500, seed) for p in _param_grid()),
            1e-13,
        )
    )
    checks.append(
        _at_most(
            "gamma2 equivariance at the organizing center",
            equivariance_defect(ModelParamsDirectory.ORGANIZING_CENTER, GroupElement.gamma2(), 500, seed),
            1e-13,
        )
    )
    checks.append(
        _measured(
            "gamma2 defect at (tau1, tau2) = (0, 0.3)",
            equivariance_defect(ModelParamsDirectory.SYMMETRY_TEST, GroupElement.gamma2(), 500, seed),
        )
    )
    checks.append(
        _at_most(
            "sphere tangency <f(x), x> = 0",
            max(sphere_tangency_defect(p, n_tangency, seed) for p in _param_grid()),
            1e-12,
        )
    )

    # Jacobians against central differences.
    p_mixed = ModelParams(tau1=0.5, tau2=0.2, kappa=0.3)
    checks.append(
        _at_most(
            "4D Jacobian vs finite differences",
            _max_fd_error(
                lambda x: eval_field_4d(p_mixed, x), lambda x: eval_jacobian_4d(p_mixed, x), sample_sphere(100, seed)
            ),
            1e-6,
        )
    )
    p_quot = ModelParams(tau1=0.5)
    checks.append(
        _at_most(
            "3D quotient Jacobian vs finite differences",
            _max_fd_error(
                lambda y: eval_field_3d(p_quot, y), lambda y: eval_jacobian_3d(p_quot, y), sample_sphere(100, seed, 3)
            ),
            1e-6,
        )
    )
    checks.append(
        _at_most(
            "2D planar Jacobian vs finite differences",
            _max_fd_error(
                lambda z: eval_field_2d(p_quot, z), lambda z: eval_jacobian_2d(p_quot, z), sample_sphere(100, seed, 2)
            ),
            1e-6,
        )
    )

    # Linearization at O1 and O2.
    center = ModelParamsDirectory.ORGANIZING_CENTER
    formulas = eigenvalue_formulas(center)
    checks.append(
        _at_most(
            "eigenvalues at O1 and O2",
            max(
                _eigen_mismatch(tangent_eigenvalues(center, o1), formulas["O1"]),
                _eigen_mismatch(tangent_eigenvalues(center, o2), formulas["O2"]),
            ),
            1e-10,
        )
    )

    # Golden vector against exact rational evaluation.
    p_gold = ModelParams(tau1=0.5, tau2=0.2)
    x_gold = (0.1, 0.1, 0.0, -0.99)
    exact = exact_field_4d(p_gold, x_gold)
    checks.append(
        _at_most(
            "golden field vector vs exact arithmetic",
            max(abs(float(v) - float(e)) for v, e in zip(eval_field_4d(p_gold, np.array(x_gold)), exact, strict=True)),
            1e-14,
        )
    )

    # Constants and regime curves.
    c = derived_constants(center)
    a, b, w = Fraction(center.alpha), Fraction(center.beta), Fraction(center.omega)
    checks.append(
        _at_most(
            "delta1 and Komega vs exact arithmetic",
            max(abs(c.delta1 - float((a - b) / (a + b))), abs(c.Komega - float(2 * a * w / (a + b) ** 2))),
            1e-12,
        )
    )
    h1_ref, h2_ref = _decimal_curves(c.Komega)
    checks.append(
        _at_most(
            "h1 and h2 vs 50-digit decimals",
            float(max(abs(Decimal(h1_curve(c.Komega)) - h1_ref), abs(Decimal(h2_curve(c.Komega)) - h2_ref))),
            1e-12,
        )
    )
    ks = np.logspace(-3, 3, 121)
    checks.append(
        _above("min h2 − h1 over Komega in [1e-3, 1e3]", min(h2_curve(k) - h1_curve(k) for k in ks), 0.0)
    )

    for check in checks:
        _logger.debug("%s: %.3g (passed=%s)", check.name, check.value, check.passed)
    return checks


def all_passed(checks: Sequence[Check]) -> bool:
    return all(c.passed for c in checks if c.asserted)


def format_report(checks: Sequence[Check]) -> str:
    def status(c: Check) -> str:
        if not c.asserted:
            return "measured"
        return "pass" if c.passed else "FAIL"

    rows = [
        (c.name, f"{c.value:.3e}", "" if math.isnan(c.threshold) else f"{c.threshold:.0e}", status(c)) for c in checks
    ]
    return tabulate(rows, headers=["check", "value", "threshold", "status"], tablefmt="github")
