"""Tests for rank one conformal modules."""

from __future__ import annotations

from fractions import Fraction

import pytest

from conformalblock import (
    AlgebraSpec,
    BracketTableError,
    CheckStatus,
    ConformalElement,
    ModulePreset,
    ModuleSpec,
    Poly,
    WindowError,
    check_module_axioms,
    classify_rank1_window,
)
from conformalblock.modules import element_action, module_action
from conformalblock.poly import var

d = var("d")
l = var("l")


@pytest.mark.parametrize(
    "module",
    [
        ModuleSpec.trivial(),
        ModuleSpec.c_a(3),
        ModuleSpec.c_a(),
        ModuleSpec.m(1, 0),
        ModuleSpec.m(Fraction(1, 2), 2),
        ModuleSpec.m(),
    ],
    ids=["trivial", "c_a:a=3", "c_a:symbolic", "m:1,0", "m:1/2,2", "m:symbolic"],
)
def test_module_axioms_hold(block: AlgebraSpec, module: ModuleSpec) -> None:
    """Test the built-in modules for all parameter values."""
    for i in range(3):
        for j in range(3):
            assert check_module_axioms(block, module, i, j).status is CheckStatus.PASS


def test_module_axiom_failure(block: AlgebraSpec) -> None:
    """Test a nonzero action of J1 violates the commutator axiom."""
    module = ModuleSpec.custom({0: Poly.parse("d + 2*l"), 1: Poly.constant(1)})
    report = check_module_axioms(block, module, 0, 1)
    assert report.status is CheckStatus.FAIL
    assert report.entries[0].residual == "-2*l"


def test_module_action_is_conformal() -> None:
    """Test `J_0 l (p(d) v) = p(d + l) g_0(l, d) v`."""
    module = ModuleSpec.m(2, 1)
    assert module_action(module, 0, d, "l") == (d + l) * (d + 1 + 2 * l)
    assert module_action(module, 1, d, "l").is_zero


def test_one_dimensional_module_normalizes_partial() -> None:
    """Test `d` acts by the scalar `a` on `C_a`."""
    module = ModuleSpec.custom({0: Poly.parse("d")}, Poly.constant(3))
    assert not module.is_free
    assert module_action(module, 0, Poly.constant(1), "l") == 3


def test_element_action() -> None:
    """Test `d J_0` acts as `-l J_0`."""
    module = ModuleSpec.m(1, 0)
    one = Poly.constant(1)
    assert element_action(module, ConformalElement.generator(0, d), one, "l") == (-l) * (d + l)
    assert element_action(module, ConformalElement.center(), one, "l").is_zero


def test_describe() -> None:
    """Test module descriptions used in check names."""
    assert ModuleSpec.trivial().describe() == "trivial"
    assert ModuleSpec.c_a(1).describe() == "c_a:a=1"
    assert ModuleSpec.m(1, Fraction(1, 2)).describe() == "m:A=1/2,D=1"
    assert ModuleSpec.m().describe() == "m"
    assert ModuleSpec.m().symbolic_parameters == frozenset({"D", "A"})
    assert ModuleSpec.c_a().preset is ModulePreset.C_A


@pytest.mark.parametrize(
    ("delta", "alpha"),
    [(None, None), (Fraction(1, 2), 0), (Fraction(2, 7), 3)],
)
def test_rank1_classification_is_trivial(
    block: AlgebraSpec, delta: Fraction | None, alpha: Fraction | None
) -> None:
    """Test J_k (k >= 1) must act by zero on free rank one modules."""
    classification = classify_rank1_window(block, 4, 6, delta=delta, alpha=alpha)
    assert classification.is_trivial
    assert classification.is_certified
    assert classification.basis.dimension == 0


def test_rank1_classification_generic_point(block: AlgebraSpec) -> None:
    """Test unbound parameters are also solved at a rational point."""
    classification = classify_rank1_window(block, 2, 3)
    assert classification.specialization == {"D": Fraction(2, 7), "A": Fraction(3, 11)}
    assert classification.specialized_dimension == 0
    assert classification.is_certified

    classification = classify_rank1_window(block, 2, 3, delta=Fraction(1, 2))
    assert classification.specialization == {"A": Fraction(3, 11)}
    assert classification.specialized_dimension == 0

    classification = classify_rank1_window(block, 2, 3, delta=Fraction(1, 2), alpha=0)
    assert classification.specialization == {}
    assert classification.specialized_dimension is None
    assert classification.is_certified


def test_rank1_classification_exceptional_delta(block: AlgebraSpec) -> None:
    """Test delta = 1 admits a nonzero `g_1` for the `J_0` constraint alone."""
    classification = classify_rank1_window(block, 1, 2, delta=1, alpha=0)
    assert not classification.is_trivial
    assert not classification.is_certified
    (solution,) = classification.solutions
    g1 = solution[1]
    expected = Poly.parse("2*d^2 + 3*l*d + l^2")
    point = {"l": 1, "d": 0}
    assert g1 * expected.substitute_all(point) == expected * g1.substitute_all(point)
    module = ModuleSpec(ModulePreset.CUSTOM, d, ((0, d + l), (1, g1)))
    assert check_module_axioms(block, module, 0, 1).status is CheckStatus.PASS


def test_rank1_classification_errors(block: AlgebraSpec) -> None:
    """Test classification preconditions."""
    with pytest.raises(WindowError):
        classify_rank1_window(block, 0, 2)
    spec = AlgebraSpec.custom(
        {
            (0, 0): ConformalElement.parse("(d + 2*l) J0"),
            (0, 1): ConformalElement.parse("l J0"),
            (1, 1): ConformalElement.parse("0 J1"),
        }
    )
    with pytest.raises(BracketTableError):
        classify_rank1_window(spec, 1, 1)
