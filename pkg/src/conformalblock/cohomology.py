"""Cochains, the differential and truncated cohomology dimensions.

Cochains are stored on ascending tuples of generator indices with values in
`l1, ..., lq` (and `d` for free modules). The window bounds the total weight of
a tuple; the degree bound applies to the total degree in the lambdas and `d`.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
import logging
import random

from conformalblock.algebra import AlgebraSpec
from conformalblock.exceptions import CochainError, CostGuardError, SymbolicParameterError
from conformalblock.linalg import RationalMatrix, SpanBuilder, kernel_basis, rank
from conformalblock.models import CheckReport
from conformalblock.modules import ModuleSpec, module_action
from conformalblock.poly import (
    LAMBDA,
    PARTIAL,
    PLACEHOLDER,
    ZERO,
    Monomial,
    Poly,
    lambda_var,
    monomial_exponents,
    var,
)
from conformalblock.util import sort_with_sign

_LOGGER = logging.getLogger(__name__)

MAX_DEGREE = 3

WINDOW_CONVENTION = (
    "window N bounds the total weight of generator tuples; degree D bounds the "
    "total degree in the lambdas and d; coboundaries have preimages of degree <= D+1"
)

IndexTuple = tuple[int, ...]


def lambdas(count: int) -> list[Poly]:
    """Return the lambda variables `l1, ..., l<count>`."""
    return [var(lambda_var(position + 1)) for position in range(count)]


def index_tuples(spec: AlgebraSpec, q: int, window: int) -> list[IndexTuple]:
    """Return the ascending q-tuples of generators with total weight <= window."""
    indices = spec.indices(window)

    def extend(prefix: IndexTuple, remaining: int) -> Iterator[IndexTuple]:
        if len(prefix) == q:
            yield prefix
            return
        start = prefix[-1] if prefix else 0
        for index in indices:
            if index >= start and index <= remaining:
                yield from extend((*prefix, index), remaining - index)

    return list(extend((), window))


def _blocks(indices: IndexTuple) -> list[list[int]]:
    """Group positions of equal indices."""
    blocks: list[list[int]] = []
    for position, index in enumerate(indices):
        if blocks and indices[blocks[-1][0]] == index:
            blocks[-1].append(position)
        else:
            blocks.append([position])
    return blocks


def antisymmetrize(indices: IndexTuple, value: Poly) -> Poly:
    """Average `value` over permutations of lambdas of equal generators, with sign."""
    blocks = [block for block in _blocks(indices) if len(block) > 1]
    if not blocks:
        return value
    names = [lambda_var(position + 1) for position in range(len(indices))]
    total = ZERO
    count = 0
    for arrangement in product(*(permutations(block) for block in blocks)):
        mapping: dict[str, Poly] = {}
        sign = 1
        for block, image in zip(blocks, arrangement, strict=True):
            _, _, block_sign = sort_with_sign(image)
            sign *= block_sign
            for source, target in zip(block, image, strict=True):
                mapping[names[source]] = var(names[target])
        total = total + value.substitute_all(mapping).scale(sign)
        count += 1
    return total.scale(Fraction(1, count))


@dataclass(frozen=True)
class Cochain:
    """A q-cochain with coefficients in a module, restricted to a weight window."""

    degree: int
    module: ModuleSpec
    window: int
    values: Mapping[IndexTuple, Poly] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate stored tuples."""
        for indices in self.values:
            if len(indices) != self.degree or list(indices) != sorted(indices):
                msg = f"Cochain of degree {self.degree} stored on non-canonical tuple {indices}"
                raise CochainError(msg)

    def value(self, indices: IndexTuple) -> Poly:
        """Return the stored value on a canonical tuple."""
        return self.values.get(indices, ZERO)

    def evaluate(self, indices: Sequence[int], arguments: Sequence[Poly]) -> Poly:
        """Evaluate on arbitrary generators with arbitrary lambda arguments.

        Uses skew-symmetry under simultaneous permutation; zero outside the window.
        """
        if sum(indices) > self.window:
            return ZERO
        ordered, order, sign = sort_with_sign(indices)
        stored = self.values.get(ordered)
        if stored is None or stored.is_zero:
            return ZERO
        mapping = {lambda_var(position + 1): arguments[source] for position, source in enumerate(order)}
        return stored.substitute_all(mapping).scale(sign)

    @property
    def is_zero(self) -> bool:
        """Return whether every value vanishes."""
        return all(value.is_zero for value in self.values.values())

    def coordinates(self) -> dict[Hashable, Fraction]:
        """Return the coefficients keyed by (tuple, monomial)."""
        return {
            (indices, monomial): coefficient
            for indices, value in self.values.items()
            for monomial, coefficient in value.items()
        }

    def map_values(self, function: Callable[[IndexTuple, Poly], Poly]) -> Cochain:
        """Apply a function to every stored value."""
        return Cochain(
            self.degree,
            self.module,
            self.window,
            {indices: new for indices, value in self.values.items() if (new := function(indices, value))},
        )

    def __add__(self, other: Cochain) -> Cochain:
        """Add."""
        values = dict(self.values)
        for indices, value in other.values.items():
            values[indices] = values.get(indices, ZERO) + value
        return Cochain(self.degree, self.module, max(self.window, other.window), {k: v for k, v in values.items() if v})

    def __sub__(self, other: Cochain) -> Cochain:
        """Subtract."""
        return self + other.map_values(lambda _, value: -value)

    def __str__(self) -> str:
        """Render the nonzero values."""
        parts = [
            f"{indices}: {value}"
            for indices, value in sorted(self.values.items())
            if not value.is_zero
        ]
        return "; ".join(parts) or "0"


@dataclass(frozen=True)
class ReducedCochain:
    """Image of a cochain under the reduction map."""

    degree: int
    module: ModuleSpec
    window: int
    values: Mapping[IndexTuple, Poly] = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        """Return whether every value vanishes."""
        return all(value.is_zero for value in self.values.values())

    def coordinates(self) -> dict[Hashable, Fraction]:
        """Return the coefficients keyed by (tuple, monomial)."""
        return {
            (indices, monomial): coefficient
            for indices, value in self.values.items()
            for monomial, coefficient in value.items()
        }

    def __str__(self) -> str:
        """Render the nonzero values."""
        parts = [f"{indices}: {value}" for indices, value in sorted(self.values.items()) if value]
        return "; ".join(parts) or "0"


@dataclass(frozen=True)
class TruncationParams:
    """Window, degree bound and cochain degree."""

    window: int
    degree: int
    q: int

    def __post_init__(self) -> None:
        """Validate the parameters."""
        if min(self.window, self.degree, self.q) < 0:
            msg = "Truncation parameters are nonnegative"
            raise CochainError(msg)

    def report(self) -> dict[str, int]:
        """Return the parameters for reports."""
        return {"N": self.window, "D": self.degree, "q": self.q}


@dataclass(frozen=True)
class CohomologyDims:
    """Dimensions of cocycles, coboundaries and cohomology on a window."""

    cocycle_dim: int
    coboundary_dim: int
    h_dim: int
    params: TruncationParams
    reduced: bool

    def as_dict(self) -> dict[str, int]:
        """Return the three dimensions."""
        return {
            "cocycle_dim": self.cocycle_dim,
            "coboundary_dim": self.coboundary_dim,
            "h_dim": self.h_dim,
        }


def _check_supported(spec: AlgebraSpec) -> None:
    if spec.has_center:
        msg = "Cochains over centrally extended algebras are not supported"
        raise CochainError(msg)


def differential(spec: AlgebraSpec, mspec: ModuleSpec, gamma: Cochain) -> Cochain:
    """Return `d gamma` on the (q+1)-tuples of the same weight window.

    Action terms carry the sign `(-1)^i` and bracket terms `(-1)^(i+j)` with
    0-based positions; the bracket lands in the first slot with lambda `li + lj`.
    """
    _check_supported(spec)
    q = gamma.degree + 1
    variables = lambdas(q)
    values: dict[IndexTuple, Poly] = {}
    for indices in index_tuples(spec, q, gamma.window):
        total = ZERO
        for i in range(q):
            rest = indices[:i] + indices[i + 1 :]
            inner = gamma.evaluate(rest, variables[:i] + variables[i + 1 :])
            if inner:
                term = module_action(mspec, indices[i], inner, variables[i])
                total = total - term if i % 2 else total + term
        for i in range(q):
            for j in range(i + 1, q):
                bracket = spec.generator_bracket(indices[i], indices[j])
                if not bracket.central.is_zero:
                    msg = "Bracket with a central term cannot be fed to a cochain"
                    raise CochainError(msg)
                combined = variables[i] + variables[j]
                rest = indices[:i] + indices[i + 1 : j] + indices[j + 1 :]
                arguments = [combined, *variables[:i], *variables[i + 1 : j], *variables[j + 1 :]]
                for k, coefficient in bracket.terms:
                    inner = gamma.evaluate((k, *rest), arguments)
                    if not inner:
                        continue
                    factor = coefficient.substitute_all({PARTIAL: -combined, PLACEHOLDER: variables[i]})
                    term = factor * inner
                    total = total - term if (i + j) % 2 else total + term
        if total:
            values[indices] = total
    return Cochain(q, mspec, gamma.window, values)


def d_squared_check(spec: AlgebraSpec, mspec: ModuleSpec, gamma: Cochain) -> CheckReport:
    """Verify `d(d gamma) = 0`."""
    residual = differential(spec, mspec, differential(spec, mspec, gamma))
    return CheckReport.from_residuals(
        "d-squared",
        [(f"q={gamma.degree}", residual)],
        window={"N": gamma.window, "q": gamma.degree},
    )


def partial_factor(mspec: ModuleSpec, q: int) -> Poly:
    """Return `d_M + l1 + ... + lq`."""
    total = mspec.partial_action
    for variable in lambdas(q):
        total = total + variable
    return total


def partial_on_cochain(mspec: ModuleSpec, gamma: Cochain) -> Cochain:
    """Return the action of the partial derivative on a cochain."""
    factor = partial_factor(mspec, gamma.degree)
    return gamma.map_values(lambda _, value: value * factor)


def sigma_value(mspec: ModuleSpec, q: int, value: Poly) -> Poly:
    """Reduce one value modulo the image of the partial derivative."""
    if mspec.is_free:
        return value.substitute(PARTIAL, -sum(lambdas(q), ZERO))
    shift = mspec.partial_action
    if q == 0:
        return value if shift.is_zero else ZERO
    last = lambda_var(q)
    return value.substitute(last, -shift - sum(lambdas(q - 1), ZERO))


def sigma_reduce(gamma: Cochain) -> ReducedCochain:
    """Return the reduction of a cochain; its kernel is `(d_M + sum li) C`."""
    mspec = gamma.module
    values = {
        indices: reduced
        for indices, value in gamma.values.items()
        if (reduced := sigma_value(mspec, gamma.degree, value))
    }
    return ReducedCochain(gamma.degree, mspec, gamma.window, values)


def lift(mspec: ModuleSpec, reduced: ReducedCochain) -> Cochain:
    """Return a cochain whose reduction is the given reduced cochain."""
    values = {
        indices: lifted
        for indices, value in reduced.values.items()
        if (lifted := antisymmetrize(indices, value))
    }
    gamma = Cochain(reduced.degree, mspec, reduced.window, values)
    if sigma_reduce(gamma).values != {k: v for k, v in reduced.values.items() if v}:
        msg = "Reduced cochain has no antisymmetric lift"
        raise CochainError(msg)
    return gamma


def reduced_differential(spec: AlgebraSpec, mspec: ModuleSpec, reduced: ReducedCochain) -> ReducedCochain:
    """Return the differential of the reduced complex."""
    return sigma_reduce(differential(spec, mspec, lift(mspec, reduced)))


def homotopy_tau(spec: AlgebraSpec, mspec: ModuleSpec, gamma: Cochain) -> Cochain:
    """Return `(-1)^(q-1) gamma(..., J0)` at lambda zero."""
    q = gamma.degree
    if q < 1:
        msg = "Contraction needs a cochain of degree at least 1"
        raise CochainError(msg)
    sign = -1 if (q - 1) % 2 else 1
    variables = lambdas(q - 1)
    values: dict[IndexTuple, Poly] = {}
    for indices in index_tuples(spec, q - 1, gamma.window):
        value = gamma.evaluate((*indices, 0), [*variables, ZERO])
        if value:
            values[indices] = value.scale(sign)
    return Cochain(q - 1, mspec, gamma.window, values)


def homotopy_residual(spec: AlgebraSpec, mspec: ModuleSpec, gamma: Cochain) -> Cochain:
    """Return `(d tau + tau d) gamma - (g_0(0, d) + sum li) gamma`."""
    anticommutator = differential(spec, mspec, homotopy_tau(spec, mspec, gamma)) + homotopy_tau(
        spec, mspec, differential(spec, mspec, gamma)
    )
    g0 = mspec.action(0).substitute(LAMBDA, 0)
    factor = g0 + sum(lambdas(gamma.degree), ZERO)
    expected = gamma.map_values(lambda _, value: mspec.normalize(value * factor))
    return anticommutator - expected


def homotopy_check(spec: AlgebraSpec, mspec: ModuleSpec, gamma: Cochain) -> CheckReport:
    """Verify the contraction identity on a cochain."""
    return CheckReport.from_residuals(
        "homotopy",
        [(f"q={gamma.degree}", homotopy_residual(spec, mspec, gamma))],
        window={"N": gamma.window, "q": gamma.degree},
    )


def _monomials(count: int, degree: int, *, with_partial: bool) -> Iterator[Poly]:
    """Yield monomials in `l1..l<count>` (and `d`) of total degree <= degree."""
    names = [lambda_var(position + 1) for position in range(count)]
    if with_partial:
        names.append(PARTIAL)
    for exponents in product(range(degree + 1), repeat=len(names)):
        if sum(exponents) > degree:
            continue
        monomial = Poly.constant(1)
        for name, exponent in zip(names, exponents, strict=True):
            if exponent:
                monomial = monomial * var(name) ** exponent
        yield monomial


def _strictly_decreasing_in_blocks(indices: IndexTuple, monomial: Poly) -> bool:
    (key,) = monomial.terms
    exponents = monomial_exponents(key)
    lambda_exponents = [exponents.get(lambda_var(position + 1), 0) for position in range(len(indices))]
    return all(
        lambda_exponents[a] > lambda_exponents[b]
        for block in _blocks(indices)
        for a, b in zip(block, block[1:])
    )


def cochain_basis(spec: AlgebraSpec, mspec: ModuleSpec, q: int, window: int, degree: int) -> list[Cochain]:
    """Return a basis of the q-cochains on the window of degree <= degree."""
    basis: list[Cochain] = []
    for indices in index_tuples(spec, q, window):
        for monomial in _monomials(q, degree, with_partial=mspec.is_free):
            if not _strictly_decreasing_in_blocks(indices, monomial):
                continue
            basis.append(Cochain(q, mspec, window, {indices: antisymmetrize(indices, monomial)}))
    return basis


def random_cochain(
    spec: AlgebraSpec,
    mspec: ModuleSpec,
    q: int,
    window: int,
    degree: int,
    *,
    seed: int = 0,
    density: float = 0.5,
) -> Cochain:
    """Return a random combination of basis cochains with small integer weights."""
    generator = random.Random(seed)  # noqa: S311
    total = Cochain(q, mspec, window)
    for element in cochain_basis(spec, mspec, q, window, degree):
        if generator.random() < density:
            weight = generator.choice([-3, -2, -1, 1, 2, 3])
            total = total + element.map_values(lambda _, value: value.scale(weight))
    return total


def _require_numeric(spec: AlgebraSpec, mspec: ModuleSpec, params: TruncationParams) -> None:
    if params.q > MAX_DEGREE:
        msg = f"Cohomology in degree {params.q} exceeds the supported degree {MAX_DEGREE}"
        raise CostGuardError(msg)
    if unbound := mspec.symbolic_parameters:
        msg = f"Dimensions need numeric values for {', '.join(sorted(unbound))}"
        raise SymbolicParameterError(msg)
    _check_supported(spec)


def _degree_split(coordinates: Mapping[Hashable, Fraction], degree: int) -> tuple[dict[Hashable, Fraction], dict[Hashable, Fraction]]:
    inside: dict[Hashable, Fraction] = {}
    outside: dict[Hashable, Fraction] = {}
    for key, value in coordinates.items():
        monomial: Monomial = key[1]  # type: ignore[index]
        target = inside if sum(e for _, e in monomial) <= degree else outside
        target[key] = value
    return inside, outside


def _image_within_degree(
    images: Sequence[Mapping[Hashable, Fraction]], degree: int
) -> list[dict[Hashable, Fraction]]:
    """Return the combinations of images whose coordinates stay within the degree."""
    split = [_degree_split(image, degree) for image in images]
    outside = RationalMatrix.from_columns({position: pair[1] for position, pair in enumerate(split)})
    combined: list[dict[Hashable, Fraction]] = []
    for combination in kernel_basis(outside).vectors:
        vector: dict[Hashable, Fraction] = {}
        for position, weight in combination.items():
            for key, value in split[position][0].items():  # type: ignore[index]
                vector[key] = vector.get(key, Fraction(0)) + weight * value
        combined.append({key: value for key, value in vector.items() if value})
    return combined


def _combine(
    vectors: Sequence[Mapping[Hashable, Fraction]], weights: Mapping[Hashable, Fraction]
) -> dict[Hashable, Fraction]:
    result: dict[Hashable, Fraction] = {}
    for position, weight in weights.items():
        for key, value in vectors[position].items():  # type: ignore[index]
            result[key] = result.get(key, Fraction(0)) + weight * value
    return {key: value for key, value in result.items() if value}


def cohomology_dims(
    spec: AlgebraSpec, mspec: ModuleSpec, params: TruncationParams, *, reduced: bool = False
) -> CohomologyDims:
    """Return cocycle, coboundary and cohomology dimensions on a window."""
    _require_numeric(spec, mspec, params)
    q, window, degree = params.q, params.window, params.degree
    basis = cochain_basis(spec, mspec, q, window, degree)
    preimages = cochain_basis(spec, mspec, q - 1, window, degree + 1) if q > 0 else []
    differentials = [differential(spec, mspec, element) for element in basis]
    boundaries = [differential(spec, mspec, element) for element in preimages]
    if reduced:
        images = [sigma_reduce(image).coordinates() for image in differentials]
        kernel = kernel_basis(RationalMatrix.from_columns(dict(enumerate(images))))
        reductions = [sigma_reduce(element).coordinates() for element in basis]
        cocycle_dim = rank(_combine(reductions, vector) for vector in kernel.vectors)
        spanned = [sigma_reduce(image).coordinates() for image in boundaries]
        coboundary_dim = rank(spanned) + rank(reductions) - rank([*spanned, *reductions])
    else:
        images = [image.coordinates() for image in differentials]
        kernel = kernel_basis(RationalMatrix.from_columns(dict(enumerate(images))))
        cocycle_dim = kernel.dimension
        coboundary_dim = rank(_image_within_degree([image.coordinates() for image in boundaries], degree))
    _LOGGER.debug(
        "Cohomology %s (reduced=%s): %d cochains, %d cocycles, %d coboundaries",
        params.report(),
        reduced,
        len(basis),
        cocycle_dim,
        coboundary_dim,
    )
    return CohomologyDims(cocycle_dim, coboundary_dim, cocycle_dim - coboundary_dim, params, reduced)


def is_reduced_coboundary(
    spec: AlgebraSpec, mspec: ModuleSpec, reduced: ReducedCochain, degree: int
) -> bool:
    """Return whether a reduced cochain is a reduced coboundary on its window."""
    _check_supported(spec)
    if reduced.degree == 0:
        return reduced.is_zero
    span = SpanBuilder()
    for element in cochain_basis(spec, mspec, reduced.degree - 1, reduced.window, degree + 1):
        span.add(sigma_reduce(differential(spec, mspec, element)).coordinates())
    return span.contains(reduced.coordinates())

