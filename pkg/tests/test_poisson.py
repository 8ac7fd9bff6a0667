"""Tests for the vertex Poisson structure and the Novikov correspondence."""

from __future__ import annotations

from itertools import product

from hypothesis import given, settings, strategies as st
import pytest
from syrupy import SnapshotAssertion

from conformalblock import (
    AlgebraSpec,
    CheckStatus,
    ConformalElement,
    Poly,
    PreVertexPoissonStructure,
    SymElement,
    check_gelfand_dorfman,
    check_novikov_axioms,
    check_th1_condition,
    novikov_product,
    sym_derivation_action,
)
from conformalblock.poisson import (
    associator,
    commutator,
    expected_th1_left_term,
    th1_left_term,
)
from conformalblock.poly import var

from .const import HALF_SKEW_WINDOW, NOVIKOV_WINDOW, VERTEX_WINDOW


def _product(factors: list[SymElement]) -> SymElement:
    result = SymElement.one()
    for factor in factors:
        result = result * factor
    return result


generators = st.builds(SymElement.generator, st.integers(0, 3), st.integers(0, 2))
monomials = st.lists(generators, min_size=1, max_size=3).map(_product)


def test_sym_element_embedding() -> None:
    """Test linear elements embed as symbols and come back."""
    element = ConformalElement.parse("(2*d + 5) J3 + 7 C")
    embedded = SymElement.from_element(element)
    assert embedded == SymElement(Poly.parse("5*x3_0 + 2*x3_1 + 7*C"))
    assert embedded.to_element() == element
    assert embedded.symbols() == [(3, 0), (3, 1)]


def test_sym_element_errors() -> None:
    """Test elements outside the symmetric algebra are rejected."""
    with pytest.raises(ValueError, match="Cannot embed"):
        SymElement.from_element(ConformalElement.generator(0, var("l")))
    square = SymElement.generator(0) * SymElement.generator(1)
    with pytest.raises(ValueError, match="not linear"):
        square.to_element()


def test_differential_algebra_derivation() -> None:
    """Test `d` raises the power of each symbol by Leibniz."""
    s = SymElement.generator(0) * SymElement.generator(1)
    assert s.derive() == (
        SymElement.generator(0, 1) * SymElement.generator(1)
        + SymElement.generator(0) * SymElement.generator(1, 1)
    )
    assert SymElement.one().derive().is_zero


def test_action_on_generators(block: AlgebraSpec) -> None:
    """Test the extended action agrees with j-products on generators."""
    a = ConformalElement.generator(1)
    assert str(sym_derivation_action(block, a, 0, SymElement.generator(2))) == "2*x3_1"
    assert str(sym_derivation_action(block, a, 1, SymElement.generator(2))) == "5*x3_0"
    assert sym_derivation_action(block, a, 2, SymElement.generator(2)).is_zero


@settings(max_examples=100)
@given(monomials, monomials, st.integers(0, 2), st.integers(0, 1))
def test_action_is_derivation(s: SymElement, t: SymElement, index: int, n: int) -> None:
    """Test `a_(n) (s t) = (a_(n) s) t + s (a_(n) t)`."""
    block = AlgebraSpec.block()
    a = ConformalElement.generator(index)
    assert sym_derivation_action(block, a, n, s * t) == (
        sym_derivation_action(block, a, n, s) * t + s * sym_derivation_action(block, a, n, t)
    )


def test_weak_skew_symmetry(structure: PreVertexPoissonStructure) -> None:
    """Test the generator-pair map is half skew-symmetric."""
    for i, j in product(range(HALF_SKEW_WINDOW + 1), repeat=2):
        assert structure.weak_residual(i, j).is_zero


def test_tilde_is_derivation(structure: PreVertexPoissonStructure) -> None:
    """Test the extension acts on products by Leibniz."""
    x, y = SymElement.generator(0), SymElement.generator(1, 1)
    left = structure.tilde(2, x * y)
    right = structure.tilde(2, x).map(lambda value: value * y) + structure.tilde(2, y).map(
        lambda value: value * x
    )
    assert left == right


def test_th1_left_term_zero(structure: PreVertexPoissonStructure) -> None:
    """Test `~Y_-^0(J0, z1) Y_-^0(J0, z2) J0` coefficient by coefficient."""
    assert str(th1_left_term(structure, 0, 0, 0)) == (
        "(x0_2) z1^-1 z2^-1 + (2*x0_1) z1^-1 z2^-2 + (3*x0_1) z1^-2 z2^-1 "
        "+ (4*x0_0) z1^-2 z2^-2 + (4*x0_0) z1^-3 z2^-1"
    )


def test_th1_left_term_closed_form(structure: PreVertexPoissonStructure) -> None:
    """Test the left term against its closed form."""
    for triple in product(range(VERTEX_WINDOW + 1), repeat=3):
        assert th1_left_term(structure, *triple) == expected_th1_left_term(*triple)


def test_th1_condition(structure: PreVertexPoissonStructure) -> None:
    """Test the vertex Poisson extension condition on a window."""
    for triple in product(range(VERTEX_WINDOW + 1), repeat=3):
        report = check_th1_condition(structure, *triple)
        assert report.status is CheckStatus.PASS
        assert report.details is not None
        assert report.details["left"] == [str(th1_left_term(structure, *triple))]


def test_th1_condition_virasoro() -> None:
    """Test the extension condition holds for the Virasoro algebra."""
    structure = PreVertexPoissonStructure(AlgebraSpec.virasoro())
    assert check_th1_condition(structure, 0, 0, 0).status is CheckStatus.PASS


@pytest.mark.parametrize(
    ("i", "j", "expected"),
    [(0, 0, "J0"), (1, 2, "3 J3"), (2, 1, "2 J3")],
)
def test_novikov_product(i: int, j: int, expected: str) -> None:
    """Test `J_i o J_j = (j + 1) J_(i+j)`."""
    assert str(novikov_product(i, j)) == expected


def test_novikov_identities() -> None:
    """Test commutator and associator closed forms."""
    a, b, c = (ConformalElement.generator(index) for index in (1, 2, 3))
    assert commutator(a, b) == ConformalElement.generator(3, 1)
    assert associator(a, b, c) == ConformalElement.generator(6, -12)


def test_novikov_axioms() -> None:
    """Test the Novikov axioms on a window."""
    for triple in product(range(NOVIKOV_WINDOW + 1), repeat=3):
        assert check_novikov_axioms(*triple).status is CheckStatus.PASS


def test_gelfand_dorfman(block: AlgebraSpec) -> None:
    """Test the lambda-bracket is built from the Novikov product."""
    for i, j in product(range(NOVIKOV_WINDOW + 1), repeat=2):
        assert check_gelfand_dorfman(block, i, j).status is CheckStatus.PASS


def test_gelfand_dorfman_fails_for_central_term(block_central: AlgebraSpec) -> None:
    """Test the central term is not produced by the Novikov product."""
    report = check_gelfand_dorfman(block_central, 0, 0)
    assert report.status is CheckStatus.FAIL
    assert report.entries[0].residual == "l^3 C"


def test_th1_left_term_snapshot(
    structure: PreVertexPoissonStructure, snapshot: SnapshotAssertion
) -> None:
    """Test the printed left term of `(J1, J2, J0)`."""
    assert th1_left_term(structure, 1, 2, 0) == snapshot
