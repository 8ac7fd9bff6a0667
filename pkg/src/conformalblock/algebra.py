"""Lie conformal algebras: generators, lambda-brackets, j-products and axiom checks."""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from math import factorial
import re

from conformalblock.exceptions import BracketTableError, PolynomialParseError
from conformalblock.models import CheckReport
from conformalblock.poly import (
    CENTER,
    LAMBDA,
    MU,
    PARTIAL,
    PLACEHOLDER,
    REGISTRY,
    ZERO,
    Poly,
    Scalar,
    as_poly,
    var,
)
from conformalblock.util import inverse_factorial

_GENERATOR = re.compile(r"J(\d+)")


class Preset(StrEnum):
    """Algebra preset."""

    BLOCK = "block"
    VIRASORO = "virasoro"
    BLOCK_CENTRAL = "block-central"
    CUSTOM = "custom"


def _canonical_central(central: Poly) -> Poly:
    """The partial derivative annihilates the center."""
    if PARTIAL in central.variables():
        return central.substitute(PARTIAL, 0)
    return central


@dataclass(frozen=True)
class ConformalElement:
    """Finite combination `sum f_i J_i + c C` with polynomial coefficients.

    Coefficients are polynomials in the partial derivative `d` and, for values
    of lambda-brackets and maps, in lambda variables as well. The central
    coordinate never involves `d`.
    """

    terms: tuple[tuple[int, Poly], ...] = ()
    central: Poly = ZERO

    @classmethod
    def of(cls, coefficients: Mapping[int, Poly | Scalar], central: Poly | Scalar = 0) -> ConformalElement:
        """Build from an index map, dropping zero coefficients."""
        terms = tuple(
            (index, as_poly(value))
            for index, value in sorted(coefficients.items())
            if as_poly(value)
        )
        if any(index < 0 for index, _ in terms):
            msg = "Generator indices are nonnegative"
            raise ValueError(msg)
        return cls(terms, _canonical_central(as_poly(central)))

    @classmethod
    def generator(cls, index: int, coefficient: Poly | Scalar = 1) -> ConformalElement:
        """Return `coefficient * J_index`."""
        return cls.of({index: coefficient})

    @classmethod
    def center(cls, coefficient: Poly | Scalar = 1) -> ConformalElement:
        """Return a multiple of the central element."""
        return cls.of({}, coefficient)

    @classmethod
    def parse(cls, text: str) -> ConformalElement:
        """Parse text such as `(2*d + 5*l) J3 + l^3 C`."""
        poly = Poly.parse(text)
        coefficients: dict[int, Poly] = {}
        central = ZERO
        center_id = REGISTRY.id_of(CENTER)
        for monomial, value in poly.items():
            basis = [
                (var_id, exponent)
                for var_id, exponent in monomial
                if var_id == center_id or _GENERATOR.fullmatch(REGISTRY.name_of(var_id))
            ]
            if len(basis) != 1 or basis[0][1] != 1:
                msg = f"Term {Poly({monomial: value})} must be linear in exactly one of J<k>, C"
                raise PolynomialParseError(msg)
            rest = Poly({tuple(p for p in monomial if p != basis[0]): value})
            if basis[0][0] == center_id:
                central = central + rest
            else:
                index = int(REGISTRY.name_of(basis[0][0])[1:])
                coefficients[index] = coefficients.get(index, ZERO) + rest
        return cls.of(coefficients, central)

    @property
    def coefficients(self) -> dict[int, Poly]:
        """Return the generator coordinates."""
        return dict(self.terms)

    def coefficient(self, index: int) -> Poly:
        """Return the coefficient of `J_index`."""
        return dict(self.terms).get(index, ZERO)

    def indices(self) -> tuple[int, ...]:
        """Return the indices with nonzero coefficient."""
        return tuple(index for index, _ in self.terms)

    @property
    def is_zero(self) -> bool:
        """Return whether the element is zero."""
        return not self.terms and self.central.is_zero

    def map_coefficients(self, function: Callable[[Poly], Poly]) -> ConformalElement:
        """Apply a function to every coordinate, central included."""
        return ConformalElement.of(
            {index: function(value) for index, value in self.terms},
            function(self.central),
        )

    def multiply(self, factor: Poly | Scalar) -> ConformalElement:
        """Multiply every coordinate by a polynomial."""
        factor = as_poly(factor)
        return self.map_coefficients(lambda value: value * factor)

    def substitute_all(self, mapping: Mapping[str, Poly | Scalar]) -> ConformalElement:
        """Substitute variables in every coordinate simultaneously."""
        return self.map_coefficients(lambda value: value.substitute_all(mapping))

    def coefficient_in(self, name: str, power: int) -> ConformalElement:
        """Return the coefficient of `name^power` coordinatewise."""
        return self.map_coefficients(lambda value: value.coefficient_in(name, power))

    def degree_in(self, name: str) -> int:
        """Return the largest degree of `name` over all coordinates."""
        return max(
            (value.degree_in(name) for value in (*self.coefficients.values(), self.central)),
            default=-1,
        )

    def __add__(self, other: ConformalElement) -> ConformalElement:
        """Add."""
        coefficients = dict(self.terms)
        for index, value in other.terms:
            coefficients[index] = coefficients.get(index, ZERO) + value
        return ConformalElement.of(coefficients, self.central + other.central)

    def derive(self) -> ConformalElement:
        """Apply the partial derivative."""
        return apply_partial(self)

    def __neg__(self) -> ConformalElement:
        """Negate."""
        return self.multiply(-1)

    def __sub__(self, other: ConformalElement) -> ConformalElement:
        """Subtract."""
        return self + (-other)

    def __str__(self) -> str:
        """Render in the element text syntax."""
        parts = [
            *((value, f"J{index}") for index, value in self.terms),
            *(((self.central, CENTER),) if self.central else ()),
        ]
        if not parts:
            return "0"
        chunks: list[str] = []
        for value, basis in parts:
            negative = len(value.terms) == 1 and next(iter(value.terms.values())) < 0
            shown = -value if negative and chunks else value
            if shown == 1:
                body = basis
            elif shown == -1:
                body = f"-{basis}"
            elif len(shown.terms) == 1:
                body = f"{shown} {basis}"
            else:
                body = f"({shown}) {basis}"
            if chunks:
                chunks.append(f"- {body}" if negative else f"+ {body}")
            else:
                chunks.append(body)
        return " ".join(chunks)


LambdaElement = ConformalElement
"""A conformal element whose coefficients also involve lambda variables."""

ZERO_ELEMENT = ConformalElement()


def apply_partial(element: ConformalElement) -> ConformalElement:
    """Apply the partial derivative, which annihilates the center."""
    return ConformalElement.of(
        {index: value * var(PARTIAL) for index, value in element.terms}
    )


def _bracket_variable(lv: str | Poly) -> Poly:
    return var(lv) if isinstance(lv, str) else lv


def _skew_entry(entry: ConformalElement) -> ConformalElement:
    """Derive `[J_j t J_i]` from `[J_i t J_j]` as `-[J_i (-t-d) J_j]`."""
    flipped = -var(PLACEHOLDER) - var(PARTIAL)
    return -entry.substitute_all({PLACEHOLDER: flipped})


@dataclass(frozen=True)
class AlgebraSpec:
    """Description of a Lie conformal algebra on generators `J_i`.

    Custom tables hold `[J_i t J_j]` written in the internal bracket variable
    and are closed under skew-symmetry on demand.
    """

    preset: Preset
    table: Mapping[tuple[int, int], ConformalElement] = field(default_factory=dict)
    has_center: bool = False
    index_set: frozenset[int] | None = None
    _cache: dict[tuple[int, int], ConformalElement] = field(
        default_factory=dict, init=False, repr=False, compare=False, hash=False
    )

    @classmethod
    def block(cls) -> AlgebraSpec:
        """Return the Block type algebra."""
        return cls(Preset.BLOCK)

    @classmethod
    def virasoro(cls) -> AlgebraSpec:
        """Return the Virasoro conformal algebra."""
        return cls(Preset.VIRASORO, index_set=frozenset({0}))

    @classmethod
    def block_central(cls) -> AlgebraSpec:
        """Return the universal central extension of the Block type algebra."""
        return cls(Preset.BLOCK_CENTRAL, has_center=True)

    @classmethod
    def custom(
        cls,
        table: Mapping[tuple[int, int], ConformalElement],
        *,
        has_center: bool = False,
        lambda_name: str = LAMBDA,
    ) -> AlgebraSpec:
        """Return an algebra given by a table of `[J_i l J_j]` values."""
        internal = {
            pair: value.substitute_all({lambda_name: var(PLACEHOLDER)})
            for pair, value in table.items()
        }
        indices = frozenset(index for pair in table for index in pair)
        return cls(Preset.CUSTOM, internal, has_center, indices)

    @classmethod
    def from_preset(cls, preset: Preset | str) -> AlgebraSpec:
        """Return a built-in algebra by preset name."""
        match Preset(preset):
            case Preset.BLOCK:
                return cls.block()
            case Preset.VIRASORO:
                return cls.virasoro()
            case Preset.BLOCK_CENTRAL:
                return cls.block_central()
        msg = "Custom algebras need a bracket table"
        raise BracketTableError(msg)

    def contains(self, index: int) -> bool:
        """Return whether `J_index` is a generator."""
        return index >= 0 and (self.index_set is None or index in self.index_set)

    def indices(self, bound: int) -> tuple[int, ...]:
        """Return the generator indices up to a bound."""
        return tuple(index for index in range(bound + 1) if self.contains(index))

    def generator_bracket(self, i: int, j: int) -> ConformalElement:
        """Return `[J_i t J_j]` in the internal bracket variable."""
        if (cached := self._cache.get((i, j))) is not None:
            return cached
        for index in (i, j):
            if not self.contains(index):
                msg = f"J{index} is not a generator of the {self.preset} algebra"
                raise BracketTableError(msg)
        t = var(PLACEHOLDER)
        if self.preset is Preset.CUSTOM:
            if (i, j) in self.table:
                value = self.table[(i, j)]
            elif (j, i) in self.table:
                value = _skew_entry(self.table[(j, i)])
            else:
                msg = f"Bracket table has neither ({i}, {j}) nor ({j}, {i})"
                raise BracketTableError(msg)
        else:
            value = ConformalElement.generator(
                i + j, (i + 1) * var(PARTIAL) + (i + j + 2) * t
            )
            if self.has_center and i == j == 0:
                value = value + ConformalElement.center(t**3)
        self._cache[(i, j)] = value
        return value


def bracket_generators(spec: AlgebraSpec, i: int, j: int, lv: str | Poly) -> ConformalElement:
    """Return `[J_i lv J_j]`."""
    return spec.generator_bracket(i, j).substitute_all({PLACEHOLDER: _bracket_variable(lv)})


def lambda_bracket(
    spec: AlgebraSpec, x: ConformalElement, y: ConformalElement, lv: str | Poly
) -> ConformalElement:
    """Return `[x lv y]` by conformal sesquilinearity.

    `[f(d) a t g(d) b] = f(-t) g(d+t) [a t b]`; other variables in the
    coefficients are carried along.
    """
    t = var(PLACEHOLDER)
    shifted = var(PARTIAL) + t
    result = ZERO_ELEMENT
    for i, left in x.terms:
        left_value = left.substitute(PARTIAL, -t)
        for j, right in y.terms:
            factor = left_value * right.substitute(PARTIAL, shifted)
            result = result + spec.generator_bracket(i, j).multiply(factor)
    return result.substitute_all({PLACEHOLDER: _bracket_variable(lv)})


def j_product(spec: AlgebraSpec, x: ConformalElement, y: ConformalElement, n: int) -> ConformalElement:
    """Return `x_(n) y`, n! times the coefficient of `t^n` in `[x t y]`."""
    if n < 0:
        msg = "j-products are indexed by nonnegative integers"
        raise ValueError(msg)
    bracket = lambda_bracket(spec, x, y, PLACEHOLDER)
    return bracket.coefficient_in(PLACEHOLDER, n).multiply(factorial(n))


def j_products(spec: AlgebraSpec, x: ConformalElement, y: ConformalElement) -> dict[int, ConformalElement]:
    """Return every nonzero j-product of a pair."""
    bracket = lambda_bracket(spec, x, y, PLACEHOLDER)
    return {
        n: product
        for n in range(bracket.degree_in(PLACEHOLDER) + 1)
        if not (product := bracket.coefficient_in(PLACEHOLDER, n).multiply(factorial(n))).is_zero
    }


def partial_power(element: ConformalElement, power: int) -> ConformalElement:
    """Apply the partial derivative `power` times."""
    for _ in range(power):
        element = apply_partial(element)
    return element


def skew_residuals(spec: AlgebraSpec, i: int, j: int) -> Iterator[tuple[str, ConformalElement]]:
    """Yield `a_(n)b + sum_k (-1)^(n+k) / k! d^k (b_(n+k)a)` for each n."""
    a = ConformalElement.generator(i)
    b = ConformalElement.generator(j)
    forward = j_products(spec, a, b)
    backward = j_products(spec, b, a)
    bound = max((*forward, *backward), default=-1)
    for n in range(bound + 1):
        residual = forward.get(n, ZERO_ELEMENT)
        for m, product in backward.items():
            if m < n:
                continue
            k = m - n
            sign = -1 if (n + k) % 2 else 1
            residual = residual + partial_power(product, k).multiply(inverse_factorial(k) * sign)
        yield f"n={n}", residual


def check_skew(spec: AlgebraSpec, i: int, j: int) -> CheckReport:
    """Verify skew-symmetry on `(J_i, J_j)` through the j-product identity."""
    return CheckReport.from_residuals(
        "skew-symmetry",
        [(f"({i}, {j}) {case}", residual) for case, residual in skew_residuals(spec, i, j)],
        window={"i": i, "j": j},
    )


def jacobi_residual(spec: AlgebraSpec, i: int, j: int, k: int) -> ConformalElement:
    """Return `[J_i l [J_j m J_k]] - [[J_i l J_j] l+m J_k] - [J_j m [J_i l J_k]]`."""
    a, b, c = (ConformalElement.generator(index) for index in (i, j, k))
    return (
        lambda_bracket(spec, a, lambda_bracket(spec, b, c, MU), LAMBDA)
        - lambda_bracket(spec, lambda_bracket(spec, a, b, LAMBDA), c, var(LAMBDA) + var(MU))
        - lambda_bracket(spec, b, lambda_bracket(spec, a, c, LAMBDA), MU)
    )


def check_jacobi(spec: AlgebraSpec, i: int, j: int, k: int) -> CheckReport:
    """Verify the Jacobi identity on `(J_i, J_j, J_k)`."""
    return CheckReport.from_residuals(
        "jacobi",
        [(f"({i}, {j}, {k})", jacobi_residual(spec, i, j, k))],
        window={"i": i, "j": j, "k": k},
    )


def reconstruct_bracket(spec: AlgebraSpec, x: ConformalElement, y: ConformalElement) -> ConformalElement:
    """Return `sum_n l^n / n! x_(n) y`."""
    result = ZERO_ELEMENT
    for n, product in j_products(spec, x, y).items():
        result = result + product.multiply(var(LAMBDA) ** n * inverse_factorial(n))
    return result

