"""Tests for the Block conformal algebra engine."""

from pathlib import Path


def fixture_path(filename: str) -> Path:
    """Return the path of a fixture."""
    return Path(__package__) / "fixtures" / filename


def load_fixture(filename: str) -> str:
    """Load a fixture."""
    return fixture_path(filename).read_text(encoding="utf-8")
