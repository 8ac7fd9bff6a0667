"""Exact linear algebra over the rationals."""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import TYPE_CHECKING

from conformalblock.exceptions import DimensionMismatchError

if TYPE_CHECKING:
    from conformalblock.poly import Scalar

Label = Hashable
Vector = dict[Label, Fraction]


@dataclass(frozen=True)
class RationalMatrix:
    """Sparse rational matrix whose columns carry opaque labels."""

    labels: tuple[Label, ...]
    rows: tuple[Mapping[int, Fraction], ...] = ()
    _index: dict[Label, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        """Validate labels and entries."""
        index = {label: position for position, label in enumerate(self.labels)}
        if len(index) != len(self.labels):
            msg = "Column labels must be unique"
            raise DimensionMismatchError(msg)
        for row in self.rows:
            if any(not 0 <= column < len(self.labels) for column in row):
                msg = "Row entry outside of the labeled columns"
                raise DimensionMismatchError(msg)
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_rows(
        cls, labels: Sequence[Label], rows: Iterable[Mapping[Label, Scalar]]
    ) -> RationalMatrix:
        """Build from rows keyed by column label."""
        index = {label: position for position, label in enumerate(labels)}
        built = []
        for row in rows:
            try:
                built.append(
                    {index[label]: Fraction(value) for label, value in row.items() if value}
                )
            except KeyError as exception:
                msg = f"Unknown column label {exception.args[0]!r}"
                raise DimensionMismatchError(msg) from exception
        return cls(tuple(labels), tuple(built))

    @classmethod
    def from_columns(
        cls, columns: Mapping[Label, Mapping[Hashable, Scalar]]
    ) -> RationalMatrix:
        """Build from per-unknown columns keyed by an arbitrary row key.

        Rows appear in first-seen order of their keys.
        """
        labels = tuple(columns)
        row_index: dict[Hashable, int] = {}
        rows: list[dict[int, Fraction]] = []
        for column, entries in enumerate(columns.values()):
            for key, value in entries.items():
                if not value:
                    continue
                if (position := row_index.get(key)) is None:
                    position = row_index[key] = len(rows)
                    rows.append({})
                rows[position][column] = Fraction(value)
        return cls(labels, tuple(rows))

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[Scalar]]) -> RationalMatrix:
        """Build from a list of rows with integer column labels."""
        width = len(entries[0]) if entries else 0
        if any(len(row) != width for row in entries):
            msg = "Ragged dense matrix"
            raise DimensionMismatchError(msg)
        return cls(
            tuple(range(width)),
            tuple(
                {column: Fraction(value) for column, value in enumerate(row) if value}
                for row in entries
            ),
        )

    @property
    def row_count(self) -> int:
        """Return the number of rows."""
        return len(self.rows)

    @property
    def column_count(self) -> int:
        """Return the number of columns."""
        return len(self.labels)

    def column_of(self, label: Label) -> int:
        """Return the position of a labeled column."""
        try:
            return self._index[label]
        except KeyError as exception:
            msg = f"Unknown column label {label!r}"
            raise DimensionMismatchError(msg) from exception

    def to_dense(self) -> list[list[Fraction]]:
        """Return the entries as nested lists."""
        return [
            [row.get(column, Fraction(0)) for column in range(self.column_count)]
            for row in self.rows
        ]

    def apply(self, vector: Mapping[Label, Scalar]) -> list[Fraction]:
        """Multiply by a label-keyed vector."""
        positional = {self.column_of(label): Fraction(v) for label, v in vector.items()}
        return [
            sum((value * positional.get(column, 0) for column, value in row.items()), Fraction(0))
            for row in self.rows
        ]


def _integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    scale = lcm(*(value.denominator for value in row.values()))
    integers = {column: int(value * scale) for column, value in row.items() if value}
    return _primitive(integers)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    content = gcd(*row.values())
    if content > 1:
        return {column: value // content for column, value in row.items()}
    return row


def _eliminate(row: dict[int, int], pivot: dict[int, int], column: int) -> dict[int, int]:
    """Return `a*row - b*pivot`, primitive, where the column entry cancels."""
    a = pivot[column]
    b = row[column]
    result = {key: a * value for key, value in row.items()}
    for key, value in pivot.items():
        total = result.get(key, 0) - b * value
        if total:
            result[key] = total
        else:
            result.pop(key, None)
    return _primitive(result) if result else result


def _echelon(rows: Iterable[Mapping[int, Fraction]]) -> list[tuple[int, dict[int, int]]]:
    """Fraction-free forward elimination, returning (pivot column, row) pairs."""
    buckets: dict[int, list[dict[int, int]]] = {}
    for row in rows:
        if integer := _integer_row(row):
            buckets.setdefault(min(integer), []).append(integer)
    pivots: list[tuple[int, dict[int, int]]] = []
    while buckets:
        column = min(buckets)
        group = buckets.pop(column)
        pivot = min(group, key=len)
        for row in group:
            if row is pivot:
                continue
            if reduced := _eliminate(row, pivot, column):
                buckets.setdefault(min(reduced), []).append(reduced)
        pivots.append((column, pivot))
    return pivots


def rref(matrix: RationalMatrix) -> tuple[RationalMatrix, tuple[int, ...]]:
    """Return the reduced row echelon form and its pivot columns."""
    echelon = _echelon(matrix.rows)
    reduced: list[dict[int, Fraction]] = []
    for column, row in echelon:
        lead = row[column]
        reduced.append({key: Fraction(value, lead) for key, value in row.items()})
    for position in range(len(reduced) - 1, -1, -1):
        column = echelon[position][0]
        source = reduced[position]
        for above in reduced[:position]:
            if (factor := above.get(column)) is None:
                continue
            for key, value in source.items():
                total = above.get(key, 0) - factor * value
                if total:
                    above[key] = total
                else:
                    above.pop(key, None)
    pivots = tuple(column for column, _ in echelon)
    return RationalMatrix(matrix.labels, tuple(reduced)), pivots


def kernel_basis(matrix: RationalMatrix) -> SubspaceBasis:
    """Return a basis of the right kernel, one vector per free column."""
    reduced, pivots = rref(matrix)
    pivot_set = set(pivots)
    vectors: list[Vector] = []
    for free in range(matrix.column_count):
        if free in pivot_set:
            continue
        vector: Vector = {matrix.labels[free]: Fraction(1)}
        for column, row in zip(pivots, reduced.rows, strict=True):
            if value := row.get(free):
                vector[matrix.labels[column]] = -value
        vectors.append(vector)
    return SubspaceBasis(matrix.labels, tuple(vectors))


def matrix_rank(matrix: RationalMatrix) -> int:
    """Return the rank of a matrix."""
    return len(_echelon(matrix.rows))


class SpanBuilder:
    """Incrementally grown span kept in reduced echelon form.

    Vectors are label-keyed dictionaries; absent labels are zero.
    """

    def __init__(self) -> None:
        """Initialize an empty span."""
        self._rows: dict[Label, Vector] = {}

    @property
    def dimension(self) -> int:
        """Return the dimension of the span."""
        return len(self._rows)

    def reduce(self, vector: Mapping[Label, Scalar]) -> Vector:
        """Return the remainder of a vector modulo the span."""
        remainder: Vector = {label: Fraction(v) for label, v in vector.items() if v}
        for pivot, row in self._rows.items():
            if (factor := remainder.get(pivot)) is None:
                continue
            for label, value in row.items():
                total = remainder.get(label, 0) - factor * value
                if total:
                    remainder[label] = total
                else:
                    remainder.pop(label, None)
        return remainder

    def contains(self, vector: Mapping[Label, Scalar]) -> bool:
        """Return whether a vector lies in the span."""
        return not self.reduce(vector)

    def add(self, vector: Mapping[Label, Scalar]) -> bool:
        """Add a vector, returning whether it enlarged the span."""
        remainder = self.reduce(vector)
        if not remainder:
            return False
        pivot = next(iter(remainder))
        lead = remainder[pivot]
        row = {label: value / lead for label, value in remainder.items()}
        for other in self._rows.values():
            if (factor := other.get(pivot)) is None:
                continue
            for label, value in row.items():
                total = other.get(label, 0) - factor * value
                if total:
                    other[label] = total
                else:
                    other.pop(label, None)
        self._rows[pivot] = row
        return True


@dataclass(frozen=True)
class SubspaceBasis:
    """Linearly independent vectors over labeled coordinates."""

    labels: tuple[Label, ...]
    vectors: tuple[Vector, ...] = ()

    @property
    def dimension(self) -> int:
        """Return the number of basis vectors."""
        return len(self.vectors)

    def coordinates(self, vector: Mapping[Label, Scalar] | Sequence[Scalar]) -> Vector:
        """Normalize a vector to label-keyed form, checking its coordinates."""
        known = set(self.labels)
        if isinstance(vector, Mapping):
            if unknown := [label for label in vector if label not in known]:
                msg = f"Vector has coordinates outside of the basis: {unknown[:3]!r}"
                raise DimensionMismatchError(msg)
            return {label: Fraction(v) for label, v in vector.items() if v}
        if len(vector) != len(self.labels):
            msg = f"Vector of length {len(vector)} for {len(self.labels)} coordinates"
            raise DimensionMismatchError(msg)
        return {label: Fraction(v) for label, v in zip(self.labels, vector, strict=True) if v}

    def span(self) -> SpanBuilder:
        """Return a span builder seeded with the basis."""
        builder = SpanBuilder()
        for vector in self.vectors:
            builder.add(vector)
        return builder


def in_span(vector: Mapping[Label, Scalar] | Sequence[Scalar], basis: SubspaceBasis) -> bool:
    """Return whether a vector is a rational combination of the basis."""
    return basis.span().contains(basis.coordinates(vector))


def rank(vectors: Iterable[Mapping[Label, Scalar]]) -> int:
    """Return the dimension of the span of label-keyed vectors."""
    builder = SpanBuilder()
    for vector in vectors:
        builder.add(vector)
    return builder.dimension


def intersection_dim(
    first: Sequence[Mapping[Label, Scalar]], second: Sequence[Mapping[Label, Scalar]]
) -> int:
    """Return dim(U ∩ S) = dim U + dim S - dim(U + S)."""
    return rank(first) + rank(second) - rank([*first, *second])
