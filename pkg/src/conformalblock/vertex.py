"""Formal distributions and the vertex Lie structure `Y_-` on a conformal algebra."""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from math import comb
from typing import Generic, Protocol, Self, TypeVar

from conformalblock.algebra import (
    AlgebraSpec,
    ConformalElement,
    j_products,
)
from conformalblock.models import CheckReport
from conformalblock.poly import PARTIAL, Scalar, monomial_exponents
from conformalblock.util import inverse_factorial

Z = "z"
Z1 = "z1"
Z2 = "z2"

Exponents = tuple[int, ...]


class Coefficient(Protocol):
    """Coefficient ring element of a formal distribution."""

    @property
    def is_zero(self) -> bool:
        """Return whether the coefficient vanishes."""

    def __add__(self, other: Self, /) -> Self:
        """Add."""

    def multiply(self, factor: Scalar, /) -> Self:
        """Multiply by a rational number."""

    def derive(self) -> Self:
        """Apply the partial derivative."""


CoefficientT = TypeVar("CoefficientT", bound=Coefficient)


def _monomial_text(variables: Sequence[str], exponents: Exponents) -> str:
    parts = []
    for name, exponent in zip(variables, exponents, strict=True):
        if exponent == 1:
            parts.append(name)
        elif exponent:
            parts.append(f"{name}^{exponent}")
    return " ".join(parts)


@dataclass(frozen=True)
class FormalDistribution(Generic[CoefficientT]):
    """Finitely supported Laurent polynomial in one or two variables.

    Zero coefficients are never stored, so equality is structural.
    """

    variables: tuple[str, ...]
    terms: Mapping[Exponents, CoefficientT] = field(default_factory=dict)

    @classmethod
    def of(
        cls,
        variables: Sequence[str],
        terms: Iterator[tuple[Exponents, CoefficientT]] | Mapping[Exponents, CoefficientT],
    ) -> FormalDistribution[CoefficientT]:
        """Collect terms, adding repeated exponents and dropping zeros."""
        collected: dict[Exponents, CoefficientT] = {}
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        for exponents, coefficient in pairs:
            if len(exponents) != len(variables):
                msg = f"Exponents {exponents} do not match variables {tuple(variables)}"
                raise ValueError(msg)
            if exponents in collected:
                collected[exponents] = collected[exponents] + coefficient
            else:
                collected[exponents] = coefficient
        return cls(
            tuple(variables),
            {exponents: value for exponents, value in sorted(collected.items()) if not value.is_zero},
        )

    @property
    def is_zero(self) -> bool:
        """Return whether there are no terms."""
        return not self.terms

    def coefficient(self, *exponents: int) -> CoefficientT | None:
        """Return the coefficient of a monomial, None when absent."""
        return self.terms.get(tuple(exponents))

    def pole_order(self, position: int = 0) -> int:
        """Return the largest `p` with a `z^-p` term in one variable (0 if none)."""
        return max((-exponents[position] for exponents in self.terms), default=0)

    def _position(self, variable: str) -> int:
        try:
            return self.variables.index(variable)
        except ValueError:
            msg = f"Variable {variable} is not one of {self.variables}"
            raise ValueError(msg) from None

    def map(self, function: Callable[[CoefficientT], CoefficientT]) -> FormalDistribution[CoefficientT]:
        """Apply a linear map to every coefficient."""
        return FormalDistribution.of(
            self.variables, ((exponents, function(value)) for exponents, value in self.terms.items())
        )

    def __add__(self, other: FormalDistribution[CoefficientT]) -> FormalDistribution[CoefficientT]:
        """Add two distributions in the same variables."""
        if other.variables != self.variables:
            msg = f"Cannot add distributions in {self.variables} and {other.variables}"
            raise ValueError(msg)
        return FormalDistribution.of(self.variables, iter([*self.terms.items(), *other.terms.items()]))

    def scale(self, factor: Scalar) -> FormalDistribution[CoefficientT]:
        """Multiply by a rational number."""
        return self.map(lambda value: value.multiply(factor))

    def __neg__(self) -> FormalDistribution[CoefficientT]:
        """Negate."""
        return self.scale(-1)

    def __sub__(self, other: FormalDistribution[CoefficientT]) -> FormalDistribution[CoefficientT]:
        """Subtract."""
        return self + -other

    def derivative(self, variable: str | None = None) -> FormalDistribution[CoefficientT]:
        """Return `d/dz` of the distribution."""
        position = 0 if variable is None else self._position(variable)
        terms = []
        for exponents, value in self.terms.items():
            power = exponents[position]
            if power:
                lowered = list(exponents)
                lowered[position] -= 1
                terms.append((tuple(lowered), value.multiply(power)))
        return FormalDistribution.of(self.variables, iter(terms))

    def shift(self, *offsets: int) -> FormalDistribution[CoefficientT]:
        """Multiply by the monomial `z1^offsets[0] ...`."""
        return FormalDistribution(
            self.variables,
            {
                tuple(e + o for e, o in zip(exponents, offsets, strict=True)): value
                for exponents, value in self.terms.items()
            },
        )

    def reflect(self, variable: str | None = None) -> FormalDistribution[CoefficientT]:
        """Substitute `z -> -z`."""
        position = 0 if variable is None else self._position(variable)
        return FormalDistribution.of(
            self.variables,
            (
                (exponents, value.multiply(-1) if exponents[position] % 2 else value)
                for exponents, value in self.terms.items()
            ),
        )

    def partial(self) -> FormalDistribution[CoefficientT]:
        """Apply the partial derivative to every coefficient."""
        return self.map(lambda value: value.derive())

    def __str__(self) -> str:
        """Render terms by decreasing exponents."""
        if not self.terms:
            return "0"
        parts = []
        for exponents, value in sorted(self.terms.items(), reverse=True):
            monomial = _monomial_text(self.variables, exponents)
            parts.append(f"({value}) {monomial}" if monomial else f"({value})")
        return " + ".join(parts)


def sing(f: FormalDistribution[CoefficientT]) -> FormalDistribution[CoefficientT]:
    """Keep the terms with every exponent negative."""
    return FormalDistribution(
        f.variables,
        {exponents: value for exponents, value in f.terms.items() if all(e < 0 for e in exponents)},
    )


def sing_exp_partial(f: FormalDistribution[CoefficientT], variable: str | None = None) -> FormalDistribution[CoefficientT]:
    """Return `Sing(e^{z d} f)` where `z` is the given variable.

    A term `c z^e` only contributes through `z^(e+s) d^s c / s!` with `s <= -1-e`.
    """
    position = 0 if variable is None else f.variables.index(variable)
    terms: list[tuple[Exponents, CoefficientT]] = []
    for exponents, value in f.terms.items():
        power = exponents[position]
        derived = value
        for s in range(-power):
            raised = list(exponents)
            raised[position] = power + s
            terms.append((tuple(raised), derived.multiply(inverse_factorial(s))))
            derived = derived.derive()
    return sing(FormalDistribution.of(f.variables, iter(terms)))


def _d_power(exponents: dict[str, int], element_text: str) -> int:
    power = exponents.pop(PARTIAL, 0)
    if exponents:
        msg = f"Vertex operators need coefficients in d only, got {element_text}"
        raise ValueError(msg)
    return power


def generator_expansion(
    spec: AlgebraSpec, i: int, k: int, variable: str = Z
) -> FormalDistribution[ConformalElement]:
    """Return `Y_-(J_i, z) J_k = sum_n J_i(n) J_k z^(-n-1)`."""
    products = j_products(spec, ConformalElement.generator(i), ConformalElement.generator(k))
    return FormalDistribution.of((variable,), {(-n - 1,): product for n, product in products.items()})


def translate(
    base: FormalDistribution[CoefficientT], m: int
) -> FormalDistribution[CoefficientT]:
    """Apply `(d - d/dz)^m` to a one-variable distribution."""
    result = FormalDistribution.of(base.variables, iter([]))
    for l in range(m + 1):  # noqa: E741
        term = base
        for _ in range(l):
            term = term.derivative()
        for _ in range(m - l):
            term = term.partial()
        result = result + term.scale(comb(m, l) * (-1) ** l)
    return result


def y_minus(
    spec: AlgebraSpec, a: ConformalElement, m: int, k: int, variable: str = Z
) -> FormalDistribution[ConformalElement]:
    """Return `Y_-(a, z)(d^m J_k)`.

    For `a = f(d) J_i` this is `f(d/dz)` applied to `(d - d/dz)^m Y_-(J_i, z) J_k`.
    """
    result: FormalDistribution[ConformalElement] = FormalDistribution.of((variable,), iter([]))
    for i, coefficient in a.terms:
        base = translate(generator_expansion(spec, i, k, variable), m)
        for monomial, value in coefficient.items():
            power = _d_power(monomial_exponents(monomial), str(a))
            term = base
            for _ in range(power):
                term = term.derivative()
            result = result + term.scale(value)
    return result


def y_minus_element(
    spec: AlgebraSpec, a: ConformalElement, b: ConformalElement, variable: str = Z
) -> FormalDistribution[ConformalElement]:
    """Return `Y_-(a, z) b` by linearity; the center is annihilated."""
    result: FormalDistribution[ConformalElement] = FormalDistribution.of((variable,), iter([]))
    for k, coefficient in b.terms:
        for monomial, value in coefficient.items():
            m = _d_power(monomial_exponents(monomial), str(b))
            result = result + y_minus(spec, a, m, k, variable).scale(value)
    return result


def half_skew_residual(spec: AlgebraSpec, i: int, j: int) -> FormalDistribution[ConformalElement]:
    """Return `Y_-(J_i, z) J_j - Sing(e^{z d} Y_-(J_j, -z) J_i)`."""
    forward = generator_expansion(spec, i, j)
    backward = generator_expansion(spec, j, i).reflect()
    return forward - sing_exp_partial(backward)


def check_half_skew(spec: AlgebraSpec, i: int, j: int) -> CheckReport:
    """Verify half skew-symmetry on `(J_i, J_j)`."""
    return CheckReport.from_residuals(
        "half-skew",
        [(f"({i}, {j})", half_skew_residual(spec, i, j))],
        window={"i": i, "j": j},
    )


def _compose(
    spec: AlgebraSpec,
    outer: ConformalElement,
    outer_variable: str,
    inner: ConformalElement,
    inner_variable: str,
    target: ConformalElement,
) -> FormalDistribution[ConformalElement]:
    variables = (Z1, Z2)
    outer_position = variables.index(outer_variable)
    terms: list[tuple[Exponents, ConformalElement]] = []
    for (e_inner,), coefficient in y_minus_element(spec, inner, target, inner_variable).terms.items():
        for (e_outer,), value in y_minus_element(spec, outer, coefficient, outer_variable).terms.items():
            exponents = (e_outer, e_inner) if outer_position == 0 else (e_inner, e_outer)
            terms.append((exponents, value))
    return FormalDistribution.of(variables, iter(terms))


def double_product(
    spec: AlgebraSpec, a: ConformalElement, b: ConformalElement, c: ConformalElement
) -> FormalDistribution[ConformalElement]:
    """Return `Y_-(a, z1) Y_-(b, z2) c`."""
    return _compose(spec, a, Z1, b, Z2, c)


def expand_difference_power(n: int, order: int) -> Iterator[tuple[int, int, int]]:
    """Yield `(binomial, e1, e2)` for `(z1 - z2)^(-n-1)` with `z2^r`, `r < order`.

    The expansion is taken in the domain `|z1| > |z2|`.
    """
    for r in range(order):
        yield comb(n + r, r), -n - 1 - r, r


def commutator_expansion(
    spec: AlgebraSpec, a: ConformalElement, b: ConformalElement, c: ConformalElement
) -> FormalDistribution[ConformalElement]:
    """Return `Sing sum_n (z1 - z2)^(-n-1) Y_-(a_(n) b, z2) c`."""
    terms: list[tuple[Exponents, ConformalElement]] = []
    for n, product in j_products(spec, a, b).items():
        inner = y_minus_element(spec, product, c, Z2)
        for (e2,), value in inner.terms.items():
            for binomial, e1, r in expand_difference_power(n, -e2):
                terms.append(((e1, e2 + r), value.multiply(binomial)))
    return sing(FormalDistribution.of((Z1, Z2), iter(terms)))


def half_commutator_residual(spec: AlgebraSpec, i: int, j: int, k: int) -> FormalDistribution[ConformalElement]:
    """Return the half commutator residual on `(J_i, J_j, J_k)`."""
    a, b, c = (ConformalElement.generator(index) for index in (i, j, k))
    left = double_product(spec, a, b, c) - _compose(spec, b, Z2, a, Z1, c)
    return left - commutator_expansion(spec, a, b, c)


def check_half_commutator(spec: AlgebraSpec, i: int, j: int, k: int) -> CheckReport:
    """Verify the half commutator formula on `(J_i, J_j, J_k)`."""
    return CheckReport.from_residuals(
        "half-commutator",
        [(f"({i}, {j}, {k})", half_commutator_residual(spec, i, j, k))],
        window={"i": i, "j": j, "k": k},
    )

