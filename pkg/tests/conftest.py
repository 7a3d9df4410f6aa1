"""Shared fixtures for the toriq test suite."""
from pathlib import Path

import pytest

from toriq.core.config import settings
from toriq.models.quotient import SubtorusAction
from toriq.schemas.problem import ProblemFile
from toriq.services.cones import cone_from_generators
from toriq.utils.fixtures import load_fixture

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def cone(*gens, lineality=()):
    """Shorthand: cone(e1, e2) in the rank given by the first vector."""
    vectors = list(gens) + list(lineality)
    return cone_from_generators(len(vectors[0]), gens, lineality)


@pytest.fixture
def problem():
    def _load(name: str) -> ProblemFile:
        return load_fixture(name)

    return _load


@pytest.fixture
def action(problem):
    def _action(name: str) -> SubtorusAction:
        return problem(name).action()

    return _action


@pytest.fixture
def workers(monkeypatch):
    """Run with a given TORIQ_WORKERS value."""

    def _set(count: int) -> None:
        monkeypatch.setattr(settings, "TORIQ_WORKERS", count)

    return _set


@pytest.fixture(autouse=True)
def plain_output(monkeypatch):
    monkeypatch.setattr(settings, "TORIQ_COLOR", False)
    monkeypatch.setattr(settings, "TORIQ_LOG_FILE", "")
