"""Tests for conformal derivations on truncation windows."""

from __future__ import annotations

import pytest

from conformalblock import (
    AlgebraSpec,
    ConformalElement,
    DerivationWindowProblem,
    WindowError,
    inner_quotient_dim,
    solve_derivation_window,
)
from conformalblock.derivations import (
    ConformalLinearMap,
    ad,
    derivation_defect,
    derivation_dims,
    map_from_vector,
)
from conformalblock.poly import var

d = var("d")
l = var("l")


@pytest.mark.parametrize(
    "element",
    [
        ConformalElement.generator(0),
        ConformalElement.generator(1, d),
        ConformalElement.generator(2) + ConformalElement.generator(0, d + 1),
    ],
)
def test_inner_maps_are_derivations(block: AlgebraSpec, element: ConformalElement) -> None:
    """Test `ad x` has no defect on any pair of the window."""
    window = 3
    derivation = ad(block, element, window)
    for i in range(window + 1):
        for j in range(window + 1 - i):
            assert derivation_defect(block, derivation, i, j).is_zero


def test_non_derivation_has_defect(block: AlgebraSpec) -> None:
    """Test the grading map `J_i -> i J_i` is not a derivation."""
    grading = ConformalLinearMap(2, {i: ConformalElement.generator(i, i) for i in range(3)})
    assert not derivation_defect(block, grading, 0, 1).is_zero
    assert derivation_defect(block, grading, 1, 1).is_zero


def test_apply_is_conformal(block: AlgebraSpec) -> None:
    """Test `d_l (f(d) a) = f(d + l) d_l a`."""
    derivation = ad(block, ConformalElement.generator(0), 1)
    image = derivation.apply(ConformalElement.generator(1, d))
    assert image == ConformalElement.generator(1, (d + l) * (d + 3 * l))


@pytest.mark.parametrize(
    ("preset", "window", "degree"),
    [("block", 2, 3), ("block", 3, 4), ("block", 4, 5), ("virasoro", 2, 3)],
)
def test_derivations_are_inner(preset: str, window: int, degree: int) -> None:
    """Test every window derivation is inner."""
    problem = DerivationWindowProblem(AlgebraSpec.from_preset(preset), window, degree)
    dims = derivation_dims(problem)
    assert dims["quotient_dim"] == 0
    assert dims["derivations"] == dims["inner"]
    assert dims["derivations"] > 0
    assert inner_quotient_dim(problem) == 0


def test_solutions_have_no_defect(block: AlgebraSpec) -> None:
    """Test solver output substituted back satisfies every constrained pair."""
    problem = DerivationWindowProblem(block, 2, 2)
    basis = solve_derivation_window(problem)
    assert basis.dimension > 0
    for vector in basis.vectors:
        derivation = map_from_vector(problem, vector)
        for i, j in problem.pairs:
            assert derivation_defect(block, derivation, i, j).is_zero


def test_window_report(block: AlgebraSpec) -> None:
    """Test the default codomain window is twice the domain window."""
    problem = DerivationWindowProblem(block, 2, 3)
    assert problem.window_report() == {"N": 2, "D": 3, "N_cod": 4}
    assert problem.pairs == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]


def test_window_errors(block: AlgebraSpec) -> None:
    """Test window violations."""
    with pytest.raises(WindowError):
        DerivationWindowProblem(block, 2, 3, codomain=3)
    with pytest.raises(WindowError):
        DerivationWindowProblem(block, -1, 3)
    derivation = ad(block, ConformalElement.generator(0), 2)
    with pytest.raises(WindowError):
        derivation.image(3)
    with pytest.raises(WindowError):
        derivation_defect(block, derivation, 2, 1)
