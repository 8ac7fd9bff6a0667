"""Vertex Poisson structure on the symmetric algebra and the Novikov correspondence."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
import re

from conformalblock.algebra import (
    ZERO_ELEMENT,
    AlgebraSpec,
    ConformalElement,
    bracket_generators,
    j_product,
    j_products,
    partial_power,
)
from conformalblock.models import CheckReport
from conformalblock.poly import CENTER, LAMBDA, ONE, PARTIAL, ZERO, Poly, Scalar, monomial_exponents, var
from conformalblock.vertex import (
    Z,
    Z1,
    Z2,
    Exponents,
    FormalDistribution,
    expand_difference_power,
    sing_exp_partial,
    translate,
)

_SYMBOL = re.compile(r"x(\d+)_(\d+)")


def symbol(index: int, power: int = 0) -> str:
    """Return the name of the symbol standing for `d^power J_index`."""
    return f"x{index}_{power}"


@dataclass(frozen=True)
class SymElement:
    """Element of the symmetric algebra over `C[d] J_i`.

    The commuting symbol `x<i>_<m>` stands for `d^m J_i`; `C` is the center.
    """

    poly: Poly = ZERO

    @classmethod
    def one(cls) -> SymElement:
        """Return the unit."""
        return cls(ONE)

    @classmethod
    def generator(cls, index: int, power: int = 0) -> SymElement:
        """Return `d^power J_index`."""
        return cls(var(symbol(index, power)))

    @classmethod
    def from_element(cls, element: ConformalElement) -> SymElement:
        """Embed a linear element; coefficients must be polynomials in d only."""
        result = ZERO
        for index, coefficient in element.terms:
            for monomial, value in coefficient.items():
                exponents = monomial_exponents(monomial)
                power = exponents.pop(PARTIAL, 0)
                if exponents:
                    msg = f"Cannot embed {element} into the symmetric algebra"
                    raise ValueError(msg)
                result = result + var(symbol(index, power)).scale(value)
        if not element.central.is_zero:
            if not element.central.is_constant:
                msg = f"Cannot embed {element} into the symmetric algebra"
                raise ValueError(msg)
            result = result + var(CENTER).scale(element.central.constant_term)
        return cls(result)

    def symbols(self) -> list[tuple[int, int]]:
        """Return the `(index, power)` pairs occurring."""
        found = []
        for name in self.poly.variables():
            if match := _SYMBOL.fullmatch(name):
                found.append((int(match[1]), int(match[2])))
        return sorted(found)

    def to_element(self) -> ConformalElement:
        """Return the linear element this represents."""
        if self.poly.degree() > 1 or self.poly.constant_term:
            msg = f"{self} is not linear"
            raise ValueError(msg)
        result = ConformalElement.center(self.poly.coefficient_in(CENTER, 1))
        for index, power in self.symbols():
            value = self.poly.coefficient_in(symbol(index, power), 1)
            result = result + ConformalElement.generator(index, var(PARTIAL) ** power * value)
        return result

    @property
    def is_zero(self) -> bool:
        """Return whether the element is zero."""
        return self.poly.is_zero

    def __add__(self, other: SymElement) -> SymElement:
        """Add."""
        return SymElement(self.poly + other.poly)

    def __sub__(self, other: SymElement) -> SymElement:
        """Subtract."""
        return SymElement(self.poly - other.poly)

    def __mul__(self, other: SymElement) -> SymElement:
        """Multiply in the symmetric algebra."""
        return SymElement(self.poly * other.poly)

    def multiply(self, factor: Scalar) -> SymElement:
        """Multiply by a rational number."""
        return SymElement(self.poly.scale(factor))

    def factor(self, index: int, power: int) -> SymElement:
        """Return the formal partial derivative along `x<index>_<power>`."""
        return SymElement(self.poly.partial_derivative(symbol(index, power)))

    def derive(self) -> SymElement:
        """Apply the derivation `x<i>_<m> -> x<i>_<m+1>`."""
        result = ZERO
        for index, power in self.symbols():
            result = result + self.poly.partial_derivative(symbol(index, power)) * var(symbol(index, power + 1))
        return SymElement(result)

    def __str__(self) -> str:
        """Render the underlying polynomial."""
        return str(self.poly)


def sym_derivation_action(spec: AlgebraSpec, a: ConformalElement, n: int, s: SymElement) -> SymElement:
    """Return `a_(n) s`, extending the n-th product as a derivation."""
    result = SymElement()
    for index, power in s.symbols():
        target = ConformalElement.generator(index, var(PARTIAL) ** power)
        image = SymElement.from_element(j_product(spec, a, target, n))
        result = result + s.factor(index, power) * image
    return result


@dataclass
class PreVertexPoissonStructure:
    """Generator-pair map `Y_-^0(J_i, z) J_j` and its tilde extension."""

    spec: AlgebraSpec = field(default_factory=AlgebraSpec.block)
    _cache: dict[tuple[int, int], FormalDistribution[SymElement]] = field(default_factory=dict, repr=False)

    def pair(self, i: int, j: int) -> FormalDistribution[SymElement]:
        """Return `Y_-^0(J_i, z) J_j`."""
        if (i, j) not in self._cache:
            products = j_products(self.spec, ConformalElement.generator(i), ConformalElement.generator(j))
            self._cache[(i, j)] = FormalDistribution.of(
                (Z,), {(-n - 1,): SymElement.from_element(product) for n, product in products.items()}
            )
        return self._cache[(i, j)]

    def weak_residual(self, i: int, j: int) -> FormalDistribution[SymElement]:
        """Return the half skew-symmetry residual of the pair map."""
        return self.pair(i, j) - sing_exp_partial(self.pair(j, i).reflect())

    def tilde(self, u: int, s: SymElement) -> FormalDistribution[SymElement]:
        """Return `~Y_-^0(J_u, z) s`.

        On `d^m v` it is `(d - d/dz)^m Y_-^0(J_u, z) v`, the coefficient of
        `z1^m / m!` in `e^{z1 d} e^{-z1 d/dz} Y_-^0(J_u, z) v`; on products it
        acts as a derivation.
        """
        result: FormalDistribution[SymElement] = FormalDistribution.of((Z,), iter([]))
        for index, power in s.symbols():
            factor = s.factor(index, power)
            result = result + translate(self.pair(u, index), power).map(lambda value, f=factor: value * f)
        return result


def _tilde_compose(
    structure: PreVertexPoissonStructure,
    outer: int,
    outer_position: int,
    inner: int,
    inner_position: int,
    target: int,
) -> FormalDistribution[SymElement]:
    terms: list[tuple[Exponents, SymElement]] = []
    for (e_inner,), coefficient in structure.pair(inner, target).terms.items():
        for (e_outer,), value in structure.tilde(outer, coefficient).terms.items():
            exponents = [0, 0]
            exponents[outer_position] = e_outer
            exponents[inner_position] = e_inner
            terms.append((tuple(exponents), value))
    return FormalDistribution.of((Z1, Z2), iter(terms))


def th1_left_term(structure: PreVertexPoissonStructure, i: int, j: int, k: int) -> FormalDistribution[SymElement]:
    """Return `~Y_-^0(J_i, z1) Y_-^0(J_j, z2) J_k`."""
    return _tilde_compose(structure, i, 0, j, 1, k)


def th1_left_side(structure: PreVertexPoissonStructure, i: int, j: int, k: int) -> FormalDistribution[SymElement]:
    """Return `~Y(J_i, z1) Y(J_j, z2) J_k - ~Y(J_j, z2) Y(J_i, z1) J_k`."""
    return th1_left_term(structure, i, j, k) - _tilde_compose(structure, j, 1, i, 0, k)


def th1_right_side(structure: PreVertexPoissonStructure, i: int, j: int, k: int) -> FormalDistribution[SymElement]:
    """Return `Sing(e^{z2 d} ~Y_-^0(J_k, -z2) Y_-^0(J_i, z1 - z2) J_j)`."""
    terms: list[tuple[Exponents, SymElement]] = []
    for (e,), product in structure.pair(i, j).terms.items():
        n = -e - 1
        acted = structure.tilde(k, product).reflect()
        for (e2,), value in acted.terms.items():
            for binomial, e1, r in expand_difference_power(n, -e2):
                terms.append(((e1, e2 + r), value.multiply(binomial)))
    return sing_exp_partial(FormalDistribution.of((Z1, Z2), iter(terms)), Z2)


def check_th1_condition(structure: PreVertexPoissonStructure, i: int, j: int, k: int) -> CheckReport:
    """Verify the extension condition for a vertex Poisson structure on `(J_i, J_j, J_k)`."""
    left = th1_left_side(structure, i, j, k)
    residual = left - th1_right_side(structure, i, j, k)
    return CheckReport.from_residuals(
        "th1",
        [(f"({i}, {j}, {k})", residual)],
        window={"i": i, "j": j, "k": k},
        details={"left": [str(th1_left_term(structure, i, j, k))]},
    )


def expected_th1_left_term(i: int, j: int, k: int) -> FormalDistribution[SymElement]:
    """Return the closed form of `~Y_-^0(J_i, z1) Y_-^0(J_j, z2) J_k` for the Block algebra."""
    total = i + j + k
    terms: dict[Exponents, SymElement] = {
        (-1, -1): SymElement.generator(total, 2).multiply((j + 1) * (i + 1)),
        (-2, -1): SymElement.generator(total, 1).multiply((j + 1) * (2 * i + j + k + 3)),
        (-3, -1): SymElement.generator(total).multiply(2 * (j + 1) * (total + 2)),
        (-1, -2): SymElement.generator(total, 1).multiply((i + 1) * (j + k + 2)),
        (-2, -2): SymElement.generator(total).multiply((j + k + 2) * (total + 2)),
    }
    return FormalDistribution.of((Z1, Z2), terms)


def novikov_product(i: int, j: int) -> ConformalElement:
    """Return `J_i o J_j = (j + 1) J_(i+j)`."""
    return ConformalElement.generator(i + j, j + 1)


def novikov(x: ConformalElement, y: ConformalElement) -> ConformalElement:
    """Extend the Novikov product bilinearly over rational coefficients."""
    result = ZERO_ELEMENT
    for i, left in x.terms:
        for j, right in y.terms:
            if not (left.is_constant and right.is_constant):
                msg = "The Novikov product is defined over rational coefficients"
                raise ValueError(msg)
            result = result + novikov_product(i, j).multiply(left.constant_term * right.constant_term)
    return result


def commutator(x: ConformalElement, y: ConformalElement) -> ConformalElement:
    """Return `x o y - y o x`."""
    return novikov(x, y) - novikov(y, x)


def associator(x: ConformalElement, y: ConformalElement, z: ConformalElement) -> ConformalElement:
    """Return `(x o y) o z - x o (y o z)`."""
    return novikov(novikov(x, y), z) - novikov(x, novikov(y, z))


def _novikov_residuals(i: int, j: int, k: int) -> Iterator[tuple[str, ConformalElement]]:
    a, b, c = (ConformalElement.generator(index) for index in (i, j, k))
    yield "left-symmetry", associator(a, b, c) - associator(b, a, c)
    yield "right-commutativity", novikov(novikov(a, b), c) - novikov(novikov(a, c), b)
    yield "commutator", commutator(a, b) - ConformalElement.generator(i + j, j - i)
    yield "lie-jacobi", (
        commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
    )


def check_novikov_axioms(i: int, j: int, k: int) -> CheckReport:
    """Verify the Novikov axioms and the commutator bracket on `(J_i, J_j, J_k)`."""
    return CheckReport.from_residuals(
        "novikov",
        [(f"({i}, {j}, {k}) {name}", residual) for name, residual in _novikov_residuals(i, j, k)],
        window={"i": i, "j": j, "k": k},
    )


def gelfand_dorfman_residual(spec: AlgebraSpec, i: int, j: int) -> ConformalElement:
    """Return `[J_i l J_j] - d(J_j o J_i) - l (J_i o J_j + J_j o J_i)`."""
    a, b = ConformalElement.generator(i), ConformalElement.generator(j)
    quadratic = partial_power(novikov(b, a), 1) + (novikov(a, b) + novikov(b, a)).multiply(var(LAMBDA))
    return bracket_generators(spec, i, j, LAMBDA) - quadratic


def check_gelfand_dorfman(spec: AlgebraSpec, i: int, j: int) -> CheckReport:
    """Verify that the lambda-bracket is the one built from the Novikov product."""
    return CheckReport.from_residuals(
        "gelfand-dorfman",
        [(f"({i}, {j})", gelfand_dorfman_residual(spec, i, j))],
        window={"i": i, "j": j},
    )
