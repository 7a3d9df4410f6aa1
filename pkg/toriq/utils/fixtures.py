"""Bundled example problems under toriq/data/fixtures."""
from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Tuple, Union

from toriq.core.exceptions import ProblemFileError
from toriq.schemas.problem import ProblemFile, load_problem

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "data" / "fixtures"

# short names used by older scripts and documentation
FIXTURE_ALIASES: Dict[str, str] = {
    "sec5": "merged_orthant",
    "sec5_quotient_fan": "merged_orthant_fan",
    "sec6": "non_open_image",
    "sec7": "unglued_orbits",
}


@lru_cache(maxsize=1)
def _fixture_index() -> Dict[str, Tuple[Path, str]]:
    index = {}
    for path in sorted(FIXTURE_DIR.glob("*.json")):
        with path.open(encoding="utf-8") as handle:
            description = json.load(handle).get("description", "")
        index[path.stem] = (path, description)
    return index


def list_fixtures() -> List[Tuple[str, str]]:
    """(name, description) for every bundled fixture, sorted by name."""
    return [(name, description) for name, (_, description) in _fixture_index().items()]


def fixture_path(name: str) -> Path:
    try:
        return _fixture_index()[FIXTURE_ALIASES.get(name, name)][0]
    except KeyError:
        raise ProblemFileError(name, "no such file or bundled fixture") from None


def resolve_problem_path(argument: Union[str, Path]) -> Path:
    """A path on disk, or else the name of a bundled fixture (with or without .json)."""
    path = Path(argument)
    if path.is_file():
        return path
    name = path.name[:-5] if path.name.endswith(".json") else path.name
    return fixture_path(name)


def load_fixture(name: str) -> ProblemFile:
    return load_problem(fixture_path(name))
