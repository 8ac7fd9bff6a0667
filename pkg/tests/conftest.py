"""Fixtures for the Block conformal algebra engine."""

from click.testing import CliRunner
import pytest
from syrupy import SnapshotAssertion

from conformalblock import AlgebraSpec, PreVertexPoissonStructure

from .syrupy import ConformalSnapshotExtension


@pytest.fixture(name="snapshot")
def snapshot_assertion(snapshot: SnapshotAssertion) -> SnapshotAssertion:
    """Return snapshot assertion fixture with the conformal extension."""
    return snapshot.use_extension(ConformalSnapshotExtension)


@pytest.fixture(name="block")
def block_algebra() -> AlgebraSpec:
    """Return the Block type algebra."""
    return AlgebraSpec.block()


@pytest.fixture(name="block_central")
def block_central_algebra() -> AlgebraSpec:
    """Return the central extension of the Block type algebra."""
    return AlgebraSpec.block_central()


@pytest.fixture(name="structure")
def pre_vertex_poisson_structure(block: AlgebraSpec) -> PreVertexPoissonStructure:
    """Return the pre-vertex Poisson structure of the Block type algebra."""
    return PreVertexPoissonStructure(block)


@pytest.fixture(name="cli_runner")
def click_runner() -> CliRunner:
    """Return a click test runner."""
    return CliRunner()
