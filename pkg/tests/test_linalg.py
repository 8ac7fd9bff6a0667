"""Tests for exact rational linear algebra."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import given, strategies as st
import pytest

from conformalblock import DimensionMismatchError, RationalMatrix, kernel_basis, rref
from conformalblock.linalg import (
    SpanBuilder,
    SubspaceBasis,
    in_span,
    intersection_dim,
    matrix_rank,
    rank,
)

matrices = st.integers(1, 4).flatmap(
    lambda width: st.lists(
        st.lists(st.integers(-3, 3), min_size=width, max_size=width),
        min_size=1,
        max_size=4,
    )
)


def test_rref() -> None:
    """Test reduced row echelon form of an invertible matrix."""
    reduced, pivots = rref(RationalMatrix.from_dense([[2, 4], [1, 3]]))
    assert pivots == (0, 1)
    assert reduced.to_dense() == [[1, 0], [0, 1]]


def test_rref_fractions() -> None:
    """Test reduction produces rational entries."""
    reduced, pivots = rref(RationalMatrix.from_dense([[2, 1, 0], [0, 0, 3]]))
    assert pivots == (0, 2)
    assert reduced.to_dense() == [[1, Fraction(1, 2), 0], [0, 0, 1]]


def test_kernel_basis() -> None:
    """Test one kernel vector per free column."""
    matrix = RationalMatrix.from_dense([[1, 2, 3], [2, 4, 6]])
    kernel = kernel_basis(matrix)
    assert matrix_rank(matrix) == 1
    assert kernel.dimension == 2
    assert kernel.vectors == ({1: 1, 0: -2}, {2: 1, 0: -3})


def test_labeled_columns() -> None:
    """Test building from per-unknown columns."""
    matrix = RationalMatrix.from_columns({"a": {"r1": 1}, "b": {"r1": 1, "r2": 1}})
    assert matrix.labels == ("a", "b")
    assert matrix.row_count == 2
    assert matrix.column_of("b") == 1
    assert kernel_basis(matrix).dimension == 0
    assert matrix.apply({"a": 2, "b": -1}) == [1, -1]


def test_unknown_label() -> None:
    """Test unknown column labels are rejected."""
    matrix = RationalMatrix.from_rows(["x", "y"], [{"x": 1}])
    with pytest.raises(DimensionMismatchError):
        matrix.column_of("z")
    with pytest.raises(DimensionMismatchError):
        RationalMatrix.from_rows(["x"], [{"y": 1}])
    with pytest.raises(DimensionMismatchError):
        RationalMatrix(("x", "x"))
    with pytest.raises(DimensionMismatchError):
        RationalMatrix.from_dense([[1, 2], [3]])


def test_coordinates_mismatch() -> None:
    """Test vectors must match the basis coordinates."""
    basis = SubspaceBasis(("x", "y"), ({"x": Fraction(1)},))
    with pytest.raises(DimensionMismatchError):
        basis.coordinates([1, 2, 3])
    with pytest.raises(DimensionMismatchError):
        in_span({"z": 1}, basis)
    assert in_span([2, 0], basis)
    assert not in_span([0, 1], basis)


def test_span_builder() -> None:
    """Test incremental spans."""
    span = SpanBuilder()
    assert span.add({"x": 1, "y": 1})
    assert span.add({"y": 2})
    assert not span.add({"x": 3, "y": 5})
    assert span.dimension == 2
    assert span.contains({"x": 1})
    assert not span.contains({"z": 1})


def test_intersection_dim() -> None:
    """Test dim(U ∩ S) for coordinate planes."""
    first = [{"x": 1}, {"y": 1}]
    second = [{"y": 1}, {"z": 1}]
    assert intersection_dim(first, second) == 1
    assert rank([*first, *second]) == 3


@given(matrices)
def test_rank_nullity(entries: list[list[int]]) -> None:
    """Test rank plus nullity equals the number of columns."""
    matrix = RationalMatrix.from_dense(entries)
    kernel = kernel_basis(matrix)
    assert matrix_rank(matrix) + kernel.dimension == matrix.column_count
    for vector in kernel.vectors:
        assert not any(matrix.apply(vector))
