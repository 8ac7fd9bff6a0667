"""Tests for algebra and module spec files."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from conformalblock import (
    AlgebraSpec,
    CheckStatus,
    ModulePreset,
    ModuleSpec,
    Preset,
    SpecFileError,
    bracket_generators,
    check_skew,
    load_spec,
)
from conformalblock.poly import Poly
from conformalblock.spec_file import load_algebra_spec, load_module_spec, parse_coefficients

from . import fixture_path, load_fixture


def test_custom_algebra() -> None:
    """Test a custom table reproducing the Virasoro algebra."""
    spec = load_algebra_spec(fixture_path("custom_virasoro.toml"))
    assert spec.preset is Preset.CUSTOM
    assert spec.indices(3) == (0,)
    assert str(bracket_generators(spec, 0, 0, "l")) == "(d + 2*l) J0"
    assert check_skew(spec, 0, 0).status is CheckStatus.PASS


def test_custom_algebra_failing_skew() -> None:
    """Test a loadable table may still fail the axioms."""
    spec = load_algebra_spec(fixture_path("custom_bad_skew.toml"))
    assert check_skew(spec, 0, 0).status is CheckStatus.FAIL


def test_edited_custom_table(tmp_path: Path) -> None:
    """Test changing the weight of a custom table breaks skew-symmetry."""
    path = tmp_path / "edited.toml"
    path.write_text(
        load_fixture("custom_virasoro.toml").replace("(d + 2*l) J0", "(d + 3*l) J0"),
        encoding="utf-8",
    )
    spec = load_algebra_spec(path)
    assert str(bracket_generators(spec, 0, 0, "l")) == "(d + 3*l) J0"
    assert check_skew(spec, 0, 0).status is CheckStatus.FAIL


def test_preset_file() -> None:
    """Test a file naming a built-in algebra."""
    spec = load_algebra_spec(fixture_path("block_preset.toml"))
    assert spec == AlgebraSpec.block_central()


def test_parse_error_location() -> None:
    """Test parse errors name the entry and the position inside the value."""
    with pytest.raises(SpecFileError) as err:
        load_algebra_spec(fixture_path("custom_parse_error.toml"))
    message = str(err.value)
    assert "bracket[1].value" in message
    assert "(line 1, column 5)" in message


def test_module_files() -> None:
    """Test module spec files."""
    module = load_module_spec(fixture_path("module_m.toml"))
    assert module.describe() == "m:A=1/2,D=1"
    custom = load_module_spec(fixture_path("module_custom.toml"))
    assert custom.preset is ModulePreset.CUSTOM
    assert custom.action(1) == 1
    assert custom.action(0) == Poly.parse("d + 2*l")


def test_load_spec_dispatches_on_kind() -> None:
    """Test the kind key selects the loader."""
    assert isinstance(load_spec(fixture_path("module_m.toml")), ModuleSpec)
    assert isinstance(load_spec(fixture_path("custom_virasoro.toml")), AlgebraSpec)


@pytest.mark.parametrize(
    ("content", "match"),
    [
        ('preset = "block"\ncolour = "blue"\n', "colour"),
        ('preset = "nope"\n', "preset"),
        ('preset = "block"\n[[bracket]]\ni = 0\nj = 0\nvalue = "J0"\n', "custom"),
        ('preset = "custom"\n', "at least one"),
        ('preset = "custom"\n[[bracket]]\ni = 0\nj = -1\nvalue = "J0"\n', "nonnegative"),
        (
            'preset = "custom"\n[[bracket]]\ni = 0\nj = 0\nvalue = "J0"\n'
            '[[bracket]]\ni = 0\nj = 0\nvalue = "J0"\n',
            "duplicate",
        ),
        ('preset = "custom"\n[[bracket]]\ni = 0\nj = 0\nvalue = "l^3 C"\n', "has_center"),
        ('preset = "custom"\n[[bracket]]\ni = 0\nj = 0\nvalue = "m J0"\n', "unexpected variables m"),
        ('kind = "vector"\npreset = "block"\n', "unknown kind"),
        ("preset = \n", "spec.toml"),
        ('kind = "module"\npreset = "c_a"\na = "x"\n', "Not a rational"),
        ('kind = "module"\npreset = "custom-rank1"\n[[action]]\nindex = 0\nvalue = "d + m"\n', "unexpected"),
    ],
)
def test_invalid_files(tmp_path: Path, content: str, match: str) -> None:
    """Test invalid spec files raise a spec file error."""
    path = tmp_path / "spec.toml"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(SpecFileError, match=match):
        load_spec(path)


def test_missing_file(tmp_path: Path) -> None:
    """Test unreadable files."""
    with pytest.raises(SpecFileError, match="cannot read"):
        load_spec(tmp_path / "missing.toml")


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("trivial", ModuleSpec.trivial()),
        ("c_a:a=1", ModuleSpec.c_a(1)),
        ("c_a:a=symbolic", ModuleSpec.c_a()),
        ("m:delta=1,alpha=1/2", ModuleSpec.m(1, Fraction(1, 2))),
        ("m:delta=symbolic,alpha=2", ModuleSpec.m(None, 2)),
    ],
)
def test_parse_coefficients(text: str, expected: ModuleSpec) -> None:
    """Test coefficient selections."""
    assert parse_coefficients(text) == expected


@pytest.mark.parametrize(
    "text",
    ["nope", "c_a:b=1", "c_a:a", "c_a:a=foo", "trivial:a=1"],
)
def test_parse_coefficients_errors(text: str) -> None:
    """Test malformed coefficient selections."""
    with pytest.raises(ValueError):  # noqa: PT011
        parse_coefficients(text)
