"""Tests for formal distributions and the vertex Lie structure."""

from __future__ import annotations

from itertools import product

import pytest

from conformalblock import (
    AlgebraSpec,
    CheckStatus,
    ConformalElement,
    FormalDistribution,
    check_half_commutator,
    check_half_skew,
    sing,
    sing_exp_partial,
    y_minus,
)
from conformalblock.poly import var
from conformalblock.vertex import (
    Z1,
    Z2,
    double_product,
    expand_difference_power,
    generator_expansion,
    translate,
    y_minus_element,
)

from .const import HALF_SKEW_WINDOW, VERTEX_WINDOW

J0 = ConformalElement.generator(0)


def test_generator_expansion(block: AlgebraSpec) -> None:
    """Test `Y_-(J_1, z) J_2` lists the j-products by pole order."""
    expansion = generator_expansion(block, 1, 2)
    assert str(expansion) == "(2*d J3) z^-1 + (5 J3) z^-2"
    assert expansion.pole_order() == 2
    assert expansion.coefficient(-2) == ConformalElement.generator(3, 5)
    assert expansion.coefficient(-3) is None


def test_translate() -> None:
    """Test `(d - d/dz) z^-1 J0 = d J0 z^-1 + J0 z^-2`."""
    base = FormalDistribution.of(("z",), {(-1,): J0})
    assert str(translate(base, 1)) == "(d J0) z^-1 + (J0) z^-2"
    assert translate(base, 0) == base


def test_y_minus_on_derivatives(block: AlgebraSpec) -> None:
    """Test `Y_-(J_0, z) d J_0` through the translation formula."""
    assert str(y_minus(block, J0, 1, 0)) == "(d^2 J0) z^-1 + (3*d J0) z^-2 + (4 J0) z^-3"
    assert y_minus_element(block, J0, J0.derive()) == y_minus(block, J0, 1, 0)


def test_y_minus_of_derivative(block: AlgebraSpec) -> None:
    """Test `Y_-(d a, z) = d/dz Y_-(a, z)`."""
    assert y_minus(block, J0.derive(), 0, 0) == y_minus(block, J0, 0, 0).derivative()


def test_y_minus_needs_partial_coefficients(block: AlgebraSpec) -> None:
    """Test coefficients in other variables are rejected."""
    with pytest.raises(ValueError, match="coefficients in d only"):
        y_minus(block, ConformalElement.generator(0, var("l")), 0, 0)


def test_sing() -> None:
    """Test only terms with every exponent negative survive."""
    f = FormalDistribution.of((Z1, Z2), {(-1, -1): J0, (0, -1): J0, (-1, 2): J0})
    assert sing(f) == FormalDistribution.of((Z1, Z2), {(-1, -1): J0})


def test_sing_exp_partial() -> None:
    """Test `Sing(e^{z d} z^-2 J0) = z^-2 J0 + z^-1 d J0`."""
    f = FormalDistribution.of(("z",), {(-2,): J0, (1,): J0})
    assert str(sing_exp_partial(f)) == "(d J0) z^-1 + (J0) z^-2"


def test_distribution_arithmetic() -> None:
    """Test linear operations on distributions."""
    f = FormalDistribution.of(("z",), {(-1,): J0, (-2,): J0.derive()})
    assert (f - f).is_zero
    assert str(f.reflect()) == "(-J0) z^-1 + (d J0) z^-2"
    assert str(f.derivative()) == "(-J0) z^-2 + (-2*d J0) z^-3"
    assert str(f.partial()) == "(d J0) z^-1 + (d^2 J0) z^-2"
    assert str(f.shift(1)) == "(J0) + (d J0) z^-1"
    with pytest.raises(ValueError, match="do not match"):
        FormalDistribution.of(("z",), {(-1, -1): J0})
    with pytest.raises(ValueError, match="Cannot add"):
        _ = f + FormalDistribution.of((Z1, Z2), {(-1, -1): J0})


def test_double_product(block: AlgebraSpec) -> None:
    """Test `Y_-(J0, z1) Y_-(J0, z2) J0` coefficient by coefficient."""
    assert str(double_product(block, J0, J0, J0)) == (
        "(d^2 J0) z1^-1 z2^-1 + (2*d J0) z1^-1 z2^-2 + (3*d J0) z1^-2 z2^-1 "
        "+ (4 J0) z1^-2 z2^-2 + (4 J0) z1^-3 z2^-1"
    )


def test_expand_difference_power() -> None:
    """Test `(z1 - z2)^-2 = z1^-2 + 2 z1^-3 z2 + 3 z1^-4 z2^2 + ...`."""
    assert list(expand_difference_power(1, 3)) == [(1, -2, 0), (2, -3, 1), (3, -4, 2)]


@pytest.mark.parametrize("preset", ["block", "block-central", "virasoro"])
def test_half_skew(preset: str) -> None:
    """Test half skew-symmetry on a window."""
    spec = AlgebraSpec.from_preset(preset)
    for i, j in product(spec.indices(HALF_SKEW_WINDOW), repeat=2):
        assert check_half_skew(spec, i, j).status is CheckStatus.PASS


def test_half_commutator(block: AlgebraSpec) -> None:
    """Test the half commutator formula on a window."""
    for triple in product(range(VERTEX_WINDOW + 1), repeat=3):
        assert check_half_commutator(block, *triple).status is CheckStatus.PASS


def test_half_skew_failure() -> None:
    """Test a table that is not skew-symmetric breaks half skew-symmetry."""
    spec = AlgebraSpec.custom({(0, 0): ConformalElement.parse("(d + 3*l) J0")})
    report = check_half_skew(spec, 0, 0)
    assert report.status is CheckStatus.FAIL
    assert report.entries[0].residual == "(-d J0) z^-1"
