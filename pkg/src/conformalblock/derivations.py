"""Conformal derivations on truncation windows."""

from __future__ import annotations

from collections.abc import Hashable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
import logging

from conformalblock.algebra import (
    ZERO_ELEMENT,
    AlgebraSpec,
    ConformalElement,
    lambda_bracket,
)
from conformalblock.exceptions import WindowError
from conformalblock.linalg import (
    RationalMatrix,
    SpanBuilder,
    SubspaceBasis,
    kernel_basis,
)
from conformalblock.poly import LAMBDA, MU, PARTIAL, Poly, monomial_exponents, var

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConformalLinearMap:
    """Conformal linear map given by its values `d_l J_i` on a domain window.

    Values on `f(d) J_i` follow from `d_l (f(d) a) = f(d + l) d_l a`.
    """

    window: int
    images: Mapping[int, ConformalElement] = field(default_factory=dict)

    def image(self, index: int) -> ConformalElement:
        """Return `d_l J_index`."""
        if index > self.window:
            msg = f"J{index} is outside of the domain window {self.window}"
            raise WindowError(msg)
        return self.images.get(index, ZERO_ELEMENT)

    def apply(self, element: ConformalElement, lv: str | Poly = LAMBDA) -> ConformalElement:
        """Return `d_lv element`; the center is sent to zero."""
        shift = var(lv) if isinstance(lv, str) else lv
        result = ZERO_ELEMENT
        for index, coefficient in element.terms:
            image = self.image(index)
            value = image if lv == LAMBDA else image.substitute_all({LAMBDA: shift})
            result = result + value.multiply(coefficient.substitute(PARTIAL, var(PARTIAL) + shift))
        return result

    def __add__(self, other: ConformalLinearMap) -> ConformalLinearMap:
        """Add pointwise."""
        images = dict(self.images)
        for index, value in other.images.items():
            images[index] = images.get(index, ZERO_ELEMENT) + value
        return ConformalLinearMap(max(self.window, other.window), images)

    def scale(self, factor: int | Fraction) -> ConformalLinearMap:
        """Multiply by a rational number."""
        return ConformalLinearMap(
            self.window, {index: value.multiply(factor) for index, value in self.images.items()}
        )

    def __str__(self) -> str:
        """Render the nonzero images."""
        parts = [f"J{index} -> {value}" for index, value in sorted(self.images.items()) if not value.is_zero]
        return "; ".join(parts) or "0"


def ad(spec: AlgebraSpec, element: ConformalElement, window: int) -> ConformalLinearMap:
    """Return the inner derivation `(ad x)_l y = [x l y]` on a window."""
    return ConformalLinearMap(
        window,
        {
            index: lambda_bracket(spec, element, ConformalElement.generator(index), LAMBDA)
            for index in spec.indices(window)
        },
    )


def derivation_defect(spec: AlgebraSpec, d: ConformalLinearMap, i: int, j: int) -> ConformalElement:
    """Return `d_l[J_i m J_j] - [(d_l J_i) l+m J_j] - [J_i m (d_l J_j)]`."""
    if i + j > d.window:
        msg = f"Pair ({i}, {j}) needs J{i + j} outside of the domain window {d.window}"
        raise WindowError(msg)
    a = ConformalElement.generator(i)
    b = ConformalElement.generator(j)
    return (
        d.apply(lambda_bracket(spec, a, b, MU))
        - lambda_bracket(spec, d.image(i), b, var(LAMBDA) + var(MU))
        - lambda_bracket(spec, a, d.image(j), MU)
    )


@dataclass(frozen=True)
class DerivationWindowProblem:
    """Unknown conformal derivation restricted to a truncation window.

    Images `d_l J_i` (i <= window) are supported on `J_k` with
    k <= codomain window and have total degree at most `degree` in (d, l).
    """

    spec: AlgebraSpec
    window: int
    degree: int
    codomain: int | None = None

    def __post_init__(self) -> None:
        """Validate the windows."""
        if self.window < 0 or self.degree < 0:
            msg = "Windows are nonnegative"
            raise WindowError(msg)
        if self.codomain is not None and self.codomain < 2 * self.window:
            msg = f"Codomain window {self.codomain} is below twice the domain window"
            raise WindowError(msg)

    @property
    def codomain_window(self) -> int:
        """Return the codomain window (twice the domain window by default)."""
        return 2 * self.window if self.codomain is None else self.codomain

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """Return the constrained domain pairs."""
        indices = self.spec.indices(self.window)
        return [(i, j) for i in indices for j in indices if i + j <= self.window]

    def unknowns(self) -> Iterator[tuple[Hashable, int, ConformalElement]]:
        """Yield (label, domain index, image monomial) for every unknown."""
        for i in self.spec.indices(self.window):
            for k in self.spec.indices(self.codomain_window):
                for a in range(self.degree + 1):
                    for b in range(self.degree + 1 - a):
                        monomial = var(PARTIAL) ** a * var(LAMBDA) ** b
                        yield ("J", i, k, a, b), i, ConformalElement.generator(k, monomial)
            if self.spec.has_center:
                for b in range(self.degree + 1):
                    yield ("C", i, b), i, ConformalElement.center(var(LAMBDA) ** b)

    def labels(self) -> tuple[Hashable, ...]:
        """Return the unknown labels in a fixed order."""
        return tuple(label for label, _, _ in self.unknowns())

    def window_report(self) -> dict[str, int]:
        """Return the window parameters for reports."""
        return {"N": self.window, "D": self.degree, "N_cod": self.codomain_window}


def _element_coordinates(element: ConformalElement, prefix: Hashable) -> Iterator[tuple[Hashable, Fraction]]:
    for index, coefficient in element.terms:
        for monomial, value in coefficient.items():
            yield (prefix, index, monomial), value
    for monomial, value in element.central.items():
        yield (prefix, "C", monomial), value


def map_to_coordinates(
    problem: DerivationWindowProblem, d: ConformalLinearMap
) -> tuple[dict[Hashable, Fraction], dict[Hashable, Fraction]]:
    """Split a map into unknown coordinates and coordinates outside the bounds."""
    known = set(problem.labels())
    inside: dict[Hashable, Fraction] = {}
    outside: dict[Hashable, Fraction] = {}
    for i in problem.spec.indices(problem.window):
        image = d.image(i)
        coordinates: list[tuple[int | str, Poly]] = [*image.terms, ("C", image.central)]
        for k, coefficient in coordinates:
            for monomial, value in coefficient.items():
                exponents = monomial_exponents(monomial)
                a = exponents.pop(PARTIAL, 0)
                b = exponents.pop(LAMBDA, 0)
                label: Hashable = ("C", i, b) if k == "C" else ("J", i, k, a, b)
                if exponents or label not in known:
                    outside[("out", i, k, monomial)] = value
                else:
                    inside[label] = value
    return inside, outside


def solve_derivation_window(problem: DerivationWindowProblem) -> SubspaceBasis:
    """Return a basis of the window derivations.

    Every coefficient of every image is an unknown; each coordinate of every
    defect on a constrained pair is one linear equation.
    """
    pairs = problem.pairs
    columns: dict[Hashable, dict[Hashable, Fraction]] = {}
    for label, i, monomial in problem.unknowns():
        d = ConformalLinearMap(problem.window, {i: monomial})
        column: dict[Hashable, Fraction] = {}
        for a, b in pairs:
            if i not in (a, b, a + b):
                continue
            defect = derivation_defect(problem.spec, d, a, b)
            for key, value in _element_coordinates(defect, (a, b)):
                column[key] = column.get(key, Fraction(0)) + value
        columns[label] = column
    matrix = RationalMatrix.from_columns(columns)
    _LOGGER.debug(
        "Derivation system for window %s: %d equations, %d unknowns",
        problem.window_report(),
        matrix.row_count,
        matrix.column_count,
    )
    basis = kernel_basis(matrix)
    _LOGGER.debug("Derivation solution space has dimension %d", basis.dimension)
    return basis


def map_from_vector(problem: DerivationWindowProblem, vector: Mapping[Hashable, Fraction]) -> ConformalLinearMap:
    """Turn solver coordinates back into a conformal linear map."""
    images: dict[int, ConformalElement] = {}
    for label, i, monomial in problem.unknowns():
        if value := vector.get(label):
            images[i] = images.get(i, ZERO_ELEMENT) + monomial.multiply(value)
    return ConformalLinearMap(problem.window, images)


def inner_basis(problem: DerivationWindowProblem) -> list[dict[Hashable, Fraction]]:
    """Return coordinates spanning the inner derivations inside the bounds.

    Candidates are `ad(d^a J_k)` with k <= codomain window and a < degree; only
    combinations whose images stay inside the bounds are kept.
    """
    candidates: dict[Hashable, tuple[dict[Hashable, Fraction], dict[Hashable, Fraction]]] = {}
    for k in problem.spec.indices(problem.codomain_window):
        for a in range(problem.degree):
            element = ConformalElement.generator(k, var(PARTIAL) ** a)
            candidates[(k, a)] = map_to_coordinates(problem, ad(problem.spec, element, problem.window))
    outside = RationalMatrix.from_columns({key: pair[1] for key, pair in candidates.items()})
    combinations = kernel_basis(outside)
    basis: list[dict[Hashable, Fraction]] = []
    for combination in combinations.vectors:
        vector: dict[Hashable, Fraction] = {}
        for key, weight in combination.items():
            for label, value in candidates[key][0].items():
                vector[label] = vector.get(label, Fraction(0)) + weight * value
        basis.append({label: value for label, value in vector.items() if value})
    return basis


def derivation_dims(problem: DerivationWindowProblem) -> dict[str, int]:
    """Return the dimensions of window derivations, inner ones and their quotient."""
    solutions = solve_derivation_window(problem)
    span = SpanBuilder()
    for vector in inner_basis(problem):
        span.add(vector)
    inner = span.dimension
    outer = sum(1 for vector in solutions.vectors if span.add(vector))
    _LOGGER.debug(
        "Window %s: %d derivations, %d inner, %d outer",
        problem.window_report(),
        solutions.dimension,
        inner,
        outer,
    )
    return {"derivations": solutions.dimension, "inner": inner, "quotient_dim": outer}


def inner_quotient_dim(problem: DerivationWindowProblem) -> int:
    """Return the number of window derivations that are not inner."""
    return derivation_dims(problem)["quotient_dim"]
