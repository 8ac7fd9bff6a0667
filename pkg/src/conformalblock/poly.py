"""Exact sparse multivariate polynomials over the rationals."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
import re
import threading
from types import MappingProxyType
from typing import Union

from conformalblock.exceptions import PolynomialParseError

PARTIAL = "d"
LAMBDA = "l"
MU = "m"
NU = "n"
DELTA = "D"
ALPHA = "A"
SHIFT = "a"
CHARGE = "c"
CENTER = "C"
PLACEHOLDER = "_t"

MAX_LAMBDA_INDEX = 9

_STRUCTURAL = re.compile(r"l[1-9]\d*|x\d+_\d+|J\d+")

Monomial = tuple[tuple[int, int], ...]
Scalar = Union[int, Fraction]


def lambda_var(index: int) -> str:
    """Return the name of the indexed lambda variable (1-based)."""
    return f"{LAMBDA}{index}"


class VariableRegistry:
    """Registry assigning every variable name a unique, fixed id.

    Ids are handed out in registration order, which is also the variable order
    used for graded lexicographic sorting.
    """

    def __init__(self, names: Iterable[str]) -> None:
        """Initialize with the preset variable order."""
        self._ids: dict[str, int] = {}
        self._names: list[str] = []
        self._lock = threading.Lock()
        for name in names:
            self.register(name)

    def register(self, name: str) -> int:
        """Register a name, returning its id."""
        with self._lock:
            if (var_id := self._ids.get(name)) is not None:
                return var_id
            var_id = len(self._names)
            self._ids[name] = var_id
            self._names.append(name)
            return var_id

    def id_of(self, name: str) -> int:
        """Return the id of a registered (or structural) name."""
        if (var_id := self._ids.get(name)) is not None:
            return var_id
        if _STRUCTURAL.fullmatch(name) is None:
            msg = f"Unknown variable: {name}"
            raise KeyError(msg)
        return self.register(name)

    def name_of(self, var_id: int) -> str:
        """Return the name for an id."""
        return self._names[var_id]

    def __contains__(self, name: object) -> bool:
        """Return whether a name is registered."""
        return name in self._ids


REGISTRY = VariableRegistry(
    [
        PARTIAL,
        LAMBDA,
        MU,
        NU,
        *(lambda_var(k) for k in range(1, MAX_LAMBDA_INDEX + 1)),
        DELTA,
        ALPHA,
        SHIFT,
        CHARGE,
        CENTER,
        PLACEHOLDER,
    ]
)


def _mono_mul(left: Monomial, right: Monomial) -> Monomial:
    if not left:
        return right
    if not right:
        return left
    exponents = dict(left)
    for var_id, exponent in right:
        exponents[var_id] = exponents.get(var_id, 0) + exponent
    return tuple(sorted(exponents.items()))


def mono_degree(monomial: Monomial) -> int:
    """Return the total degree of a monomial."""
    return sum(exponent for _, exponent in monomial)


def mono_key(monomial: Monomial) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Sort key placing monomials in descending graded lexicographic order."""
    return (
        -mono_degree(monomial),
        tuple((var_id, -exponent) for var_id, exponent in monomial),
    )


def mono_str(monomial: Monomial) -> str:
    """Render a monomial in the textual syntax."""
    parts = []
    for var_id, exponent in monomial:
        name = REGISTRY.name_of(var_id)
        parts.append(name if exponent == 1 else f"{name}^{exponent}")
    return "*".join(parts)


def _accumulate(target: dict[Monomial, Fraction], monomial: Monomial, value: Fraction) -> None:
    total = target.get(monomial, 0) + value
    if total:
        target[monomial] = total
    else:
        target.pop(monomial, None)


class Poly:
    """Immutable polynomial with nonzero rational coefficients."""

    __slots__ = ("_hash", "_terms")

    _terms: dict[Monomial, Fraction]
    _hash: int | None

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None) -> None:
        """Initialize from a monomial map, dropping zero coefficients."""
        self._terms = {
            monomial: Fraction(value)
            for monomial, value in (terms or {}).items()
            if value
        }
        self._hash = None

    @classmethod
    def _make(cls, terms: dict[Monomial, Fraction]) -> Poly:
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def constant(cls, value: Scalar) -> Poly:
        """Return a constant polynomial."""
        return cls({(): value})

    @classmethod
    def variable(cls, name: str, exponent: int = 1) -> Poly:
        """Return a power of a single variable."""
        if exponent == 0:
            return cls.constant(1)
        return cls._make({((REGISTRY.id_of(name), exponent),): Fraction(1)})

    @classmethod
    def parse(cls, text: str) -> Poly:
        """Parse the textual syntax (`2*d + 5*l`, `3/2*l1^2`)."""
        return _Parser(text).parse()

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        """Return a read-only view of the monomial map."""
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Iterate over (monomial, coefficient) in graded lexicographic order."""
        for monomial in sorted(self._terms, key=mono_key):
            yield monomial, self._terms[monomial]

    @property
    def is_zero(self) -> bool:
        """Return whether the polynomial is zero."""
        return not self._terms

    @property
    def is_constant(self) -> bool:
        """Return whether the polynomial has no variables."""
        return all(monomial == () for monomial in self._terms)

    @property
    def constant_term(self) -> Fraction:
        """Return the coefficient of the empty monomial."""
        return self._terms.get((), Fraction(0))

    def degree(self) -> int:
        """Return the total degree (-1 for zero)."""
        return max((mono_degree(m) for m in self._terms), default=-1)

    def degree_in(self, name: str) -> int:
        """Return the degree in one variable (-1 for zero)."""
        if not self._terms:
            return -1
        var_id = REGISTRY.id_of(name)
        return max(dict(m).get(var_id, 0) for m in self._terms)

    def variables(self) -> frozenset[str]:
        """Return the names of the variables that occur."""
        return frozenset(
            REGISTRY.name_of(var_id) for m in self._terms for var_id, _ in m
        )

    def __bool__(self) -> bool:
        """Return whether the polynomial is nonzero."""
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        """Compare canonical forms."""
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        """Hash the canonical form."""
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: Poly | Scalar) -> Poly:
        """Add."""
        other = as_poly(other)
        terms = dict(self._terms)
        for monomial, value in other._terms.items():
            _accumulate(terms, monomial, value)
        return Poly._make(terms)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        """Negate."""
        return Poly._make({m: -value for m, value in self._terms.items()})

    def __sub__(self, other: Poly | Scalar) -> Poly:
        """Subtract."""
        return self + (-as_poly(other))

    def __rsub__(self, other: Poly | Scalar) -> Poly:
        """Subtract from a scalar."""
        return as_poly(other) - self

    def __mul__(self, other: Poly | Scalar) -> Poly:
        """Multiply."""
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        terms: dict[Monomial, Fraction] = {}
        for left, left_value in self._terms.items():
            for right, right_value in other._terms.items():
                _accumulate(terms, _mono_mul(left, right), left_value * right_value)
        return Poly._make(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Poly:
        """Raise to a nonnegative integer power."""
        if exponent < 0:
            msg = "Negative powers are not polynomials"
            raise ValueError(msg)
        result = Poly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def scale(self, factor: Scalar) -> Poly:
        """Multiply by a rational number."""
        if not factor:
            return ZERO
        factor = Fraction(factor)
        return Poly._make({m: value * factor for m, value in self._terms.items()})

    def substitute(self, name: str, value: Poly | Scalar) -> Poly:
        """Substitute a polynomial for one variable."""
        return self.substitute_all({name: value})

    def substitute_all(self, mapping: Mapping[str, Poly | Scalar]) -> Poly:
        """Substitute polynomials for several variables simultaneously."""
        images = {REGISTRY.id_of(name): as_poly(value) for name, value in mapping.items()}
        if not images or not self._terms:
            return self
        powers: dict[tuple[int, int], Poly] = {}
        terms: dict[Monomial, Fraction] = {}
        for monomial, value in self._terms.items():
            kept = tuple((v, e) for v, e in monomial if v not in images)
            part = Poly._make({kept: value})
            for var_id, exponent in monomial:
                if var_id not in images:
                    continue
                if (power := powers.get((var_id, exponent))) is None:
                    power = powers[(var_id, exponent)] = images[var_id] ** exponent
                part = part * power
            for result_monomial, result_value in part._terms.items():
                _accumulate(terms, result_monomial, result_value)
        return Poly._make(terms)

    def partial_derivative(self, name: str) -> Poly:
        """Return the formal derivative with respect to one variable."""
        var_id = REGISTRY.id_of(name)
        terms: dict[Monomial, Fraction] = {}
        for monomial, value in self._terms.items():
            exponents = dict(monomial)
            if (exponent := exponents.get(var_id, 0)) == 0:
                continue
            if exponent == 1:
                del exponents[var_id]
            else:
                exponents[var_id] = exponent - 1
            terms[tuple(sorted(exponents.items()))] = value * exponent
        return Poly._make(terms)

    def coefficient_in(self, name: str, power: int) -> Poly:
        """Return the coefficient of `name^power`, a polynomial free of `name`."""
        var_id = REGISTRY.id_of(name)
        terms: dict[Monomial, Fraction] = {}
        for monomial, value in self._terms.items():
            if dict(monomial).get(var_id, 0) == power:
                terms[tuple((v, e) for v, e in monomial if v != var_id)] = value
        return Poly._make(terms)

    def coefficients_in(self, name: str) -> dict[int, Poly]:
        """Split by powers of one variable."""
        return {
            power: self.coefficient_in(name, power)
            for power in range(self.degree_in(name) + 1)
            if self.coefficient_in(name, power)
        }

    def __str__(self) -> str:
        """Render in the textual syntax."""
        if not self._terms:
            return "0"
        chunks: list[str] = []
        for monomial, value in self.items():
            magnitude = abs(value)
            if not monomial:
                body = str(magnitude)
            elif magnitude == 1:
                body = mono_str(monomial)
            else:
                body = f"{magnitude}*{mono_str(monomial)}"
            if not chunks:
                chunks.append(f"-{body}" if value < 0 else body)
            else:
                chunks.append(f"- {body}" if value < 0 else f"+ {body}")
        return " ".join(chunks)

    def __repr__(self) -> str:
        """Return a debugging representation."""
        return f"Poly({str(self)!r})"


ZERO = Poly()
ONE = Poly.constant(1)


def as_poly(value: Poly | Scalar) -> Poly:
    """Coerce a rational to a constant polynomial."""
    if isinstance(value, Poly):
        return value
    return Poly.constant(value)


def var(name: str) -> Poly:
    """Return the polynomial of a single variable."""
    return Poly.variable(name)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN = re.compile(
    r"(?P<space>[ \t\r]+)|(?P<newline>\n)|(?P<number>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()])"
)


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, line_start, position = 1, 0, 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        column = position - line_start + 1
        if match is None:
            msg = f"Unexpected character {text[position]!r}"
            raise PolynomialParseError(msg, line=line, column=column)
        kind = match.lastgroup or ""
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind != "space":
            tokens.append(_Token(kind, match.group(), line, column))
        position = match.end()
    tokens.append(_Token("end", "", line, position - line_start + 1))
    return tokens


class _Parser:
    """Recursive descent parser for the polynomial syntax."""

    def __init__(self, text: str) -> None:
        self._tokens = _tokenize(text)
        self._index = 0

    @property
    def _current(self) -> _Token:
        return self._tokens[self._index]

    def _advance(self) -> _Token:
        token = self._tokens[self._index]
        self._index += 1
        return token

    def _error(self, msg: str, token: _Token | None = None) -> PolynomialParseError:
        token = token or self._current
        return PolynomialParseError(msg, line=token.line, column=token.column)

    def parse(self) -> Poly:
        if self._current.kind == "end":
            raise self._error("Empty polynomial")
        result = self._expression()
        if self._current.kind != "end":
            raise self._error(f"Unexpected token {self._current.text!r}")
        return result

    def _expression(self) -> Poly:
        sign = 1
        if self._current.text in "+-" and self._current.kind == "op":
            sign = -1 if self._advance().text == "-" else 1
        result = self._term().scale(sign)
        while self._current.kind == "op" and self._current.text in "+-":
            operator = self._advance().text
            term = self._term()
            result = result + term if operator == "+" else result - term
        return result

    def _starts_factor(self) -> bool:
        token = self._current
        return token.kind in ("number", "ident") or token.text == "("

    def _term(self) -> Poly:
        result = self._power()
        while True:
            token = self._current
            if token.kind == "op" and token.text == "*":
                self._advance()
                result = result * self._power()
            elif token.kind == "op" and token.text == "/":
                self._advance()
                divisor_token = self._current
                divisor = self._power()
                if not divisor.is_constant or divisor.is_zero:
                    raise self._error("Division by a non-constant or zero", divisor_token)
                result = result.scale(1 / divisor.constant_term)
            elif self._starts_factor():
                result = result * self._power()
            else:
                return result

    def _power(self) -> Poly:
        base = self._atom()
        if self._current.kind == "op" and self._current.text == "^":
            self._advance()
            token = self._advance()
            if token.kind != "number":
                raise self._error("Exponent must be a nonnegative integer", token)
            return base ** int(token.text)
        return base

    def _atom(self) -> Poly:
        token = self._advance()
        if token.kind == "number":
            return Poly.constant(int(token.text))
        if token.kind == "ident":
            try:
                return Poly.variable(token.text)
            except KeyError:
                raise self._error(f"Unknown variable {token.text!r}", token) from None
        if token.text == "(":
            inner = self._expression()
            closing = self._advance()
            if closing.text != ")":
                raise self._error("Expected ')'", closing)
            return inner
        raise self._error(f"Unexpected token {token.text or 'end of input'!r}", token)


def monomial_exponents(monomial: Monomial) -> dict[str, int]:
    """Return the exponents of a monomial keyed by variable name."""
    return {REGISTRY.name_of(var_id): exponent for var_id, exponent in monomial}
