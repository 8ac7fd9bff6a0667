"""Conformal modules of rank one and their classification on windows."""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from itertools import product
import logging

from conformalblock.algebra import AlgebraSpec, ConformalElement, bracket_generators
from conformalblock.exceptions import BracketTableError, WindowError
from conformalblock.linalg import RationalMatrix, SubspaceBasis, kernel_basis
from conformalblock.models import CheckReport
from conformalblock.poly import (
    ALPHA,
    DELTA,
    LAMBDA,
    MU,
    PARTIAL,
    SHIFT,
    ZERO,
    Poly,
    Scalar,
    as_poly,
    var,
)

_LOGGER = logging.getLogger(__name__)

PARAMETERS = (DELTA, ALPHA, SHIFT)

# Away from the exceptional values of delta and alpha.
GENERIC_POINT = {DELTA: Fraction(2, 7), ALPHA: Fraction(3, 11)}


class ModulePreset(StrEnum):
    """Module preset."""

    TRIVIAL = "trivial"
    C_A = "c_a"
    M = "m"
    CUSTOM = "custom-rank1"


def _parameter(value: Scalar | None, name: str) -> Poly:
    return var(name) if value is None else as_poly(value)


@dataclass(frozen=True)
class ModuleSpec:
    """Rank one module `C[d]v` (or a one-dimensional module `C v`).

    `actions` holds `g_i(l, d)` with `J_i l v = g_i(l, d) v`; `partial_action`
    is `d` for free modules and a scalar for one-dimensional ones.
    """

    preset: ModulePreset
    partial_action: Poly = ZERO
    actions: tuple[tuple[int, Poly], ...] = ()
    bindings: Mapping[str, Fraction] = field(default_factory=dict)

    @classmethod
    def trivial(cls) -> ModuleSpec:
        """Return the trivial module."""
        return cls(ModulePreset.TRIVIAL)

    @classmethod
    def c_a(cls, a: Scalar | None = None) -> ModuleSpec:
        """Return the one-dimensional module with `d v = a v` (symbolic `a` if None)."""
        bindings = {} if a is None else {SHIFT: Fraction(a)}
        return cls(ModulePreset.C_A, _parameter(a, SHIFT), bindings=bindings)

    @classmethod
    def m(cls, delta: Scalar | None = None, alpha: Scalar | None = None) -> ModuleSpec:
        """Return the Virasoro-type module with `J_0 l v = (d + alpha + delta l) v`."""
        g0 = var(PARTIAL) + _parameter(alpha, ALPHA) + _parameter(delta, DELTA) * var(LAMBDA)
        bindings = {
            name: Fraction(value)
            for name, value in ((DELTA, delta), (ALPHA, alpha))
            if value is not None
        }
        return cls(ModulePreset.M, var(PARTIAL), ((0, g0),), bindings)

    @classmethod
    def custom(cls, actions: Mapping[int, Poly], partial_action: Poly | None = None) -> ModuleSpec:
        """Return a rank one module from explicit actions."""
        return cls(
            ModulePreset.CUSTOM,
            var(PARTIAL) if partial_action is None else partial_action,
            tuple(sorted((i, g) for i, g in actions.items() if g)),
        )

    @property
    def is_free(self) -> bool:
        """Return whether `d` acts freely (values carry `d`)."""
        return PARTIAL in self.partial_action.variables()

    @property
    def symbolic_parameters(self) -> frozenset[str]:
        """Return the unbound parameters."""
        names = set(self.partial_action.variables())
        for _, g in self.actions:
            names |= g.variables()
        return frozenset(names & set(PARAMETERS))

    def action(self, index: int) -> Poly:
        """Return `g_index(l, d)`."""
        return dict(self.actions).get(index, ZERO)

    def normalize(self, value: Poly) -> Poly:
        """Replace `d` by its scalar action on one-dimensional modules."""
        if self.is_free or PARTIAL not in value.variables():
            return value
        return value.substitute(PARTIAL, self.partial_action)

    def describe(self) -> str:
        """Return a short textual description."""
        if not self.bindings:
            return str(self.preset)
        values = ",".join(f"{name}={value}" for name, value in sorted(self.bindings.items()))
        return f"{self.preset}:{values}"


def module_action(mspec: ModuleSpec, index: int, value: Poly, lv: str | Poly) -> Poly:
    """Return `J_index lv (p(d) v) = p(d + lv) g_index(lv, d) v`.

    Other variables in `p` are carried along.
    """
    g = mspec.action(index)
    if g.is_zero or value.is_zero:
        return ZERO
    shift = var(lv) if isinstance(lv, str) else lv
    moved = value.substitute(PARTIAL, var(PARTIAL) + shift)
    return mspec.normalize(moved * g.substitute(LAMBDA, shift))


def element_action(mspec: ModuleSpec, element: ConformalElement, value: Poly, lv: str | Poly) -> Poly:
    """Return `x lv (p(d) v)`; `f(d) J_k` acts as `f(-lv) J_k` and the center acts by zero."""
    shift = var(lv) if isinstance(lv, str) else lv
    result = ZERO
    for index, coefficient in element.terms:
        result = result + coefficient.substitute(PARTIAL, -shift) * module_action(mspec, index, value, lv)
    return result


def module_axiom_residual(spec: AlgebraSpec, mspec: ModuleSpec, i: int, j: int) -> Poly:
    """Return `J_i l (J_j m v) - J_j m (J_i l v) - [J_i l J_j]_(l+m) v`."""
    one = Poly.constant(1)
    bracket = bracket_generators(spec, i, j, LAMBDA)
    return (
        module_action(mspec, i, module_action(mspec, j, one, MU), LAMBDA)
        - module_action(mspec, j, module_action(mspec, i, one, LAMBDA), MU)
        - element_action(mspec, bracket, one, var(LAMBDA) + var(MU))
    )


def check_module_axioms(spec: AlgebraSpec, mspec: ModuleSpec, i: int, j: int) -> CheckReport:
    """Verify the commutator axiom on `(J_i, J_j, v)` for all parameter values."""
    return CheckReport.from_residuals(
        "module-axiom",
        [(f"({i}, {j})", module_axiom_residual(spec, mspec, i, j))],
        window={"i": i, "j": j},
    )


@dataclass(frozen=True)
class Rank1Classification:
    """Solutions for the actions `g_k` (1 <= k <= window) given the `J_0` action."""

    window: int
    degree: int
    parameter_degree: int
    basis: SubspaceBasis
    solutions: list[dict[int, Poly]]
    specialization: dict[str, Fraction] = field(default_factory=dict)
    specialized_dimension: int | None = None

    @property
    def is_trivial(self) -> bool:
        """Return whether every `g_k` must vanish."""
        return not self.solutions

    @property
    def is_certified(self) -> bool:
        """Return whether the trivial answer holds for generic parameters.

        Specializing the parameters can only lower the rank of the system, so a
        trivial kernel at one rational point gives a trivial kernel over the
        field of rational functions in the parameters.
        """
        if self.specialized_dimension is None:
            return self.basis.dimension == 0
        return self.specialized_dimension == 0


def _rank1_system(
    spec: AlgebraSpec,
    base: ModuleSpec,
    window: int,
    degree: int,
    parameter_monomials: list[Poly],
) -> tuple[RationalMatrix, dict[Hashable, tuple[int, Poly]]]:
    columns: dict[Hashable, dict[Hashable, Fraction]] = {}
    unknowns: dict[Hashable, tuple[int, Poly]] = {}
    for k in range(1, window + 1):
        bracket = bracket_generators(spec, 0, k, LAMBDA)
        if bracket.indices() not in ((k,), ()) or not bracket.central.is_zero:
            msg = f"[J0 l J{k}] must be a multiple of J{k} for rank one classification"
            raise BracketTableError(msg)
        for p in range(degree + 1):
            for r in range(degree + 1 - p):
                for position, parameters in enumerate(parameter_monomials):
                    monomial = var(LAMBDA) ** p * var(PARTIAL) ** r * parameters
                    trial = ModuleSpec(ModulePreset.CUSTOM, var(PARTIAL), ((0, base.action(0)), (k, monomial)))
                    residual = module_axiom_residual(spec, trial, 0, k)
                    label = (k, p, r, position)
                    unknowns[label] = (k, monomial)
                    columns[label] = {(k, m): value for m, value in residual.items()}
    return RationalMatrix.from_columns(columns), unknowns


def classify_rank1_window(
    spec: AlgebraSpec,
    window: int,
    degree: int,
    *,
    parameter_degree: int = 1,
    delta: Scalar | None = None,
    alpha: Scalar | None = None,
) -> Rank1Classification:
    """Solve the linear constraints on `g_k` imposed by `[J_0 l J_k]`.

    Unknown coefficients of `l^p d^r` are polynomials in the unbound parameters
    of degree at most `parameter_degree`. Those solutions alone say nothing
    about generic parameters, so unbound parameters are also specialized to
    `GENERIC_POINT` and the system is solved there; see `is_certified`.
    """
    if window < 1:
        msg = "Rank one classification needs a window of at least 1"
        raise WindowError(msg)
    base = ModuleSpec.m(delta, alpha)
    symbolic = [name for name in (DELTA, ALPHA) if name in base.symbolic_parameters]
    parameter_monomials = [
        _product(var(name) ** exponent for name, exponent in zip(symbolic, exponents, strict=True))
        for exponents in product(range(parameter_degree + 1), repeat=len(symbolic))
        if sum(exponents) <= parameter_degree
    ]
    matrix, unknowns = _rank1_system(spec, base, window, degree, parameter_monomials)
    _LOGGER.debug("Rank one system: %d equations, %d unknowns", matrix.row_count, matrix.column_count)
    basis = kernel_basis(matrix)
    solutions: list[dict[int, Poly]] = []
    for vector in basis.vectors:
        solution: dict[int, Poly] = {}
        for label, value in vector.items():
            k, monomial = unknowns[label]
            solution[k] = solution.get(k, ZERO) + monomial.scale(value)
        solutions.append({k: g for k, g in sorted(solution.items()) if g})
    if not symbolic:
        return Rank1Classification(window, degree, parameter_degree, basis, solutions)
    specialization = {name: GENERIC_POINT[name] for name in symbolic}
    specialized = ModuleSpec.m(
        specialization.get(DELTA, delta), specialization.get(ALPHA, alpha)
    )
    specialized_matrix, _ = _rank1_system(spec, specialized, window, degree, [Poly.constant(1)])
    specialized_dimension = kernel_basis(specialized_matrix).dimension
    _LOGGER.debug("Rank one system at %s has %d solutions", specialization, specialized_dimension)
    return Rank1Classification(
        window, degree, parameter_degree, basis, solutions, specialization, specialized_dimension
    )


def _product(factors: Iterable[Poly]) -> Poly:
    result = Poly.constant(1)
    for factor in factors:
        result = result * factor
    return result
