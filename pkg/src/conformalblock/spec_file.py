"""Loading algebra and module descriptions from TOML files."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from pathlib import Path
import tomllib
from typing import Any, TypeVar

from mashumaro import DataClassDictMixin
from mashumaro.config import BaseConfig
from mashumaro.exceptions import ExtraKeysError, InvalidFieldValue, MissingField

from conformalblock.algebra import AlgebraSpec, ConformalElement, Preset
from conformalblock.exceptions import ConformalError, PolynomialParseError, SpecFileError
from conformalblock.modules import ModulePreset, ModuleSpec
from conformalblock.poly import ALPHA, DELTA, LAMBDA, PARTIAL, SHIFT, Poly
from conformalblock.util import parse_rational

SYMBOLIC = "symbolic"

_MODULE_VARIABLES = frozenset({PARTIAL, LAMBDA, DELTA, ALPHA, SHIFT})

_SpecFileT = TypeVar("_SpecFileT", bound=DataClassDictMixin)


class SpecKind(StrEnum):
    """Kind of a spec file."""

    ALGEBRA = "algebra"
    MODULE = "module"


@dataclass
class BracketEntry(DataClassDictMixin):
    """One `[J_i l J_j]` table entry."""

    i: int
    j: int
    value: str


@dataclass
class AlgebraSpecFile(DataClassDictMixin):
    """Algebra spec file."""

    preset: Preset
    kind: SpecKind = SpecKind.ALGEBRA
    has_center: bool = False
    bracket: list[BracketEntry] = field(default_factory=list)

    class Config(BaseConfig):
        """Mashumaro configuration."""

        forbid_extra_keys = True

    def to_spec(self, source: str) -> AlgebraSpec:
        """Build the algebra, checking the table entries."""
        if self.preset is not Preset.CUSTOM:
            if self.bracket:
                msg = f"{source}: bracket entries need preset = \"custom\""
                raise SpecFileError(msg)
            return AlgebraSpec.from_preset(self.preset)
        if not self.bracket:
            msg = f"{source}: a custom algebra needs at least one [[bracket]] entry"
            raise SpecFileError(msg)
        table: dict[tuple[int, int], ConformalElement] = {}
        for position, entry in enumerate(self.bracket):
            location = f"{source}: bracket[{position}]"
            if entry.i < 0 or entry.j < 0:
                msg = f"{location}: generator indices are nonnegative"
                raise SpecFileError(msg)
            if (entry.i, entry.j) in table:
                msg = f"{location}: duplicate entry ({entry.i}, {entry.j})"
                raise SpecFileError(msg)
            try:
                value = ConformalElement.parse(entry.value)
            except PolynomialParseError as err:
                msg = f"{location}.value: {err}"
                raise SpecFileError(msg) from err
            if not value.central.is_zero and not self.has_center:
                msg = f"{location}.value: the center C is used but has_center is false"
                raise SpecFileError(msg)
            if unknown := {
                name for _, coefficient in value.terms for name in coefficient.variables()
            } - {PARTIAL, LAMBDA}:
                msg = f"{location}.value: unexpected variables {', '.join(sorted(unknown))}"
                raise SpecFileError(msg)
            table[(entry.i, entry.j)] = value
        return AlgebraSpec.custom(table, has_center=self.has_center)


@dataclass
class ActionEntry(DataClassDictMixin):
    """One `J_index l v = value v` action."""

    index: int
    value: str


@dataclass
class ModuleSpecFile(DataClassDictMixin):
    """Module spec file."""

    preset: ModulePreset
    kind: SpecKind = SpecKind.MODULE
    a: str | None = None
    delta: str | None = None
    alpha: str | None = None
    partial: str | None = None
    action: list[ActionEntry] = field(default_factory=list)

    class Config(BaseConfig):
        """Mashumaro configuration."""

        forbid_extra_keys = True

    def to_spec(self, source: str) -> ModuleSpec:
        """Build the module."""
        match self.preset:
            case ModulePreset.TRIVIAL:
                return ModuleSpec.trivial()
            case ModulePreset.C_A:
                return ModuleSpec.c_a(_parameter(self.a, f"{source}: a"))
            case ModulePreset.M:
                return ModuleSpec.m(
                    _parameter(self.delta, f"{source}: delta"),
                    _parameter(self.alpha, f"{source}: alpha"),
                )
        actions: dict[int, Poly] = {}
        for position, entry in enumerate(self.action):
            location = f"{source}: action[{position}].value"
            actions[entry.index] = _module_poly(entry.value, location)
        partial = None if self.partial is None else _module_poly(self.partial, f"{source}: partial")
        return ModuleSpec.custom(actions, partial)


def _parameter(text: str | None, location: str) -> Fraction | None:
    if text is None or text == SYMBOLIC:
        return None
    try:
        return parse_rational(text)
    except ValueError as err:
        msg = f"{location}: {err}"
        raise SpecFileError(msg) from err


def _module_poly(text: str, location: str) -> Poly:
    try:
        value = Poly.parse(text)
    except PolynomialParseError as err:
        msg = f"{location}: {err}"
        raise SpecFileError(msg) from err
    if unknown := value.variables() - _MODULE_VARIABLES:
        msg = f"{location}: unexpected variables {', '.join(sorted(unknown))}"
        raise SpecFileError(msg)
    return value


def _read(path: Path) -> dict[str, Any]:
    try:
        with path.open("rb") as file:
            return tomllib.load(file)
    except OSError as err:
        msg = f"{path}: cannot read spec file ({err.strerror})"
        raise SpecFileError(msg) from err
    except tomllib.TOMLDecodeError as err:
        msg = f"{path}: {err}"
        raise SpecFileError(msg) from err


def _decode(model: type[_SpecFileT], data: dict[str, Any], path: Path) -> _SpecFileT:
    try:
        return model.from_dict(data)
    except (MissingField, InvalidFieldValue, ExtraKeysError) as err:
        msg = f"{path}: {err}"
        raise SpecFileError(msg) from err


def load_algebra_spec(path: str | Path) -> AlgebraSpec:
    """Load an algebra spec file."""
    path = Path(path)
    return _decode(AlgebraSpecFile, _read(path), path).to_spec(str(path))


def load_module_spec(path: str | Path) -> ModuleSpec:
    """Load a module spec file."""
    path = Path(path)
    return _decode(ModuleSpecFile, _read(path), path).to_spec(str(path))


def load_spec(path: str | Path) -> AlgebraSpec | ModuleSpec:
    """Load a spec file of either kind, dispatching on its `kind` key."""
    path = Path(path)
    data = _read(path)
    try:
        kind = SpecKind(data.get("kind", SpecKind.ALGEBRA))
    except ValueError as err:
        msg = f"{path}: unknown kind {data.get('kind')!r}"
        raise SpecFileError(msg) from err
    if kind is SpecKind.MODULE:
        return _decode(ModuleSpecFile, data, path).to_spec(str(path))
    return _decode(AlgebraSpecFile, data, path).to_spec(str(path))


def parse_coefficients(text: str) -> ModuleSpec:
    """Parse a coefficient selection such as `trivial`, `c_a:a=1` or `m:delta=1,alpha=symbolic`."""
    name, _, arguments = text.partition(":")
    values: dict[str, str] = {}
    for argument in filter(None, arguments.split(",")):
        key, separator, value = argument.partition("=")
        if not separator:
            msg = f"Expected key=value in {argument!r}"
            raise ValueError(msg)
        values[key.strip()] = value.strip()
    allowed = {"trivial": set(), "c_a": {"a"}, "m": {"delta", "alpha"}}
    if name not in allowed:
        msg = f"Unknown coefficient module {name!r}"
        raise ValueError(msg)
    if extra := set(values) - allowed[name]:
        msg = f"Unexpected parameters for {name}: {', '.join(sorted(extra))}"
        raise ValueError(msg)
    try:
        return ModuleSpecFile(ModulePreset(name), **values).to_spec("--coeff")
    except ConformalError as err:
        raise ValueError(str(err)) from err
