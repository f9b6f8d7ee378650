import pytest

from bykov_lab.core.errors import Unconverged
from bykov_lab.lyapunov.classify import CLASS_COLORS, class_for_count, classify, count_nonnegative
from bykov_lab.lyapunov.spectrum import SpectrumResult


def _result(exponents: tuple[float, float, float], converged: bool = True) -> SpectrumResult:
    return SpectrumResult(
        exponents=exponents,
        radial_exponent=-2.0,
        raw_exponents=(*exponents, -2.0),
        T_total=3750.0,
        t_transient=500.0,
        gs_interval=0.5,
        converged=converged,
        tail_variation=0.001 if converged else 0.05,
        mean_divergence=sum(exponents) - 2.0,
        positive_hint=exponents[0] > 0.03,
        final_state=(0.0, 0.0, 0.0, 1.0),
        max_orthonormality_error=1e-15,
    )


@pytest.mark.parametrize(
    ("exponents", "label", "color", "count"),
    [
        ((-0.2, -0.5, -1.0), "FixedPoint", "red", 0),
        ((0.003, -0.5, -1.0), "LimitCycle", "blue", 1),
        ((-0.009, -0.5, -1.0), "LimitCycle", "blue", 1),
        ((0.001, -0.002, -1.0), "TorusOrChaos", "yellow", 2),
        ((0.08, 0.0, -1.0), "TorusOrChaos", "yellow", 2),
        ((0.08, 0.05, 0.0), "TorusOrChaos", "yellow", 3),
    ],
)
def test_classification_rule(exponents: tuple[float, float, float], label: str, color: str, count: int) -> None:
    attractor = classify(_result(exponents))
    assert attractor.label == label
    assert attractor.color == color
    assert attractor.nonneg_count == count
    assert classify(list(exponents)) == attractor


def test_zero_tolerance_boundary() -> None:
    assert count_nonnegative([0.01, -0.01, -0.0101], 0.01) == 2
    assert count_nonnegative([0.5, 0.2, -0.3], 0.1) == 2


def test_unconverged_spectrum() -> None:
    s = _result((0.001, -0.5, -1.0), converged=False)
    with pytest.raises(Unconverged):
        classify(s)
    assert classify(s, allow_unconverged=True).color == "blue"


def test_colors() -> None:
    assert class_for_count(0).rgb == (255, 0, 0)
    assert class_for_count(1).rgb == (0, 0, 255)
    assert class_for_count(2).rgb == (255, 255, 0)
    assert CLASS_COLORS["gray"] == (128, 128, 128)
