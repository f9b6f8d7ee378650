from bykov_lab.model.constants import (
    DerivedConstants,
    Regime,
    derived_constants,
    eigenvalue_formulas,
    h1_curve,
    h2_curve,
    predicted_regime,
    regime_for,
)
from bykov_lab.model.equilibria import Equilibrium, equilibria, tangent_eigenvalues
from bykov_lab.model.field import (
    FullSystem,
    PlanarSystem,
    QuotientSystem,
    eval_field_2d,
    eval_field_3d,
    eval_field_4d,
    eval_jacobian_2d,
    eval_jacobian_3d,
    eval_jacobian_4d,
    system_for,
)
from bykov_lab.model.symmetry import (
    GroupElement,
    equivariance_defect,
    group_apply,
    sample_sphere,
    sphere_tangency_defect,
)

__all__ = [
    "DerivedConstants",
    "Equilibrium",
    "FullSystem",
    "GroupElement",
    "PlanarSystem",
    "QuotientSystem",
    "Regime",
    "derived_constants",
    "eigenvalue_formulas",
    "equilibria",
    "equivariance_defect",
    "eval_field_2d",
    "eval_field_3d",
    "eval_field_4d",
    "eval_jacobian_2d",
    "eval_jacobian_3d",
    "eval_jacobian_4d",
    "group_apply",
    "h1_curve",
    "h2_curve",
    "predicted_regime",
    "regime_for",
    "sample_sphere",
    "sphere_tangency_defect",
    "system_for",
    "tangent_eigenvalues",
]
