"""
Pydantic schema for problem files: a fan or an affine system of fans, a
sublattice and optionally a map onto a target fan.

Integers are JSON numbers or decimal strings; values beyond 2^53 are
written back as strings so files stay exact in any JSON reader.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Annotated, Any, List, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, ValidationError, model_validator
from pydantic_core import PydanticCustomError

from toriq.core.exceptions import ProblemFileError
from toriq.models.fan import AffineSystemOfFans, Fan
from toriq.models.lattice import IntMat
from toriq.models.quotient import SubtorusAction
from toriq.services.cones import cone_from_generators
from toriq.services.fans import validate_fan, validate_system
from toriq.services.quotient import make_action

INTEGER_PATTERN = re.compile(r"^[+-]?\d+$")
EXACT_JSON_LIMIT = 2**53


def _parse_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("booleans are not lattice entries")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and INTEGER_PATTERN.match(value.strip()):
        return int(value.strip())
    raise ValueError(f"expected an integer or a decimal string, got {value!r}")


def _emit_int(value: int) -> Union[int, str]:
    return str(value) if abs(value) >= EXACT_JSON_LIMIT else value


LatticeInt = Annotated[int, BeforeValidator(_parse_int), PlainSerializer(_emit_int, when_used="json")]
Vector = List[LatticeInt]
ConeGens = List[Vector]


def _length_error(path: str, length: int, expected: int) -> PydanticCustomError:
    return PydanticCustomError(
        "vector_length",
        "{path}: vector has length {length}, expected {expected}",
        {"path": path, "length": length, "expected": expected},
    )


def _fan(n: int, cones: List[ConeGens]) -> Fan:
    return validate_fan([cone_from_generators(n, gens) for gens in cones], n)


def _check_lengths(prefix: str, vectors: List[Vector], expected: int) -> None:
    for k, v in enumerate(vectors):
        if len(v) != expected:
            raise _length_error(f"{prefix}.{k}", len(v), expected)


class FanSpec(BaseModel):
    """A fan given by its maximal cones."""

    model_config = ConfigDict(extra="forbid")

    lattice_rank: int = Field(..., ge=0)
    maximal_cones: List[ConeGens] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_lengths(self):
        for c, cone in enumerate(self.maximal_cones):
            _check_lengths(f"maximal_cones.{c}", cone, self.lattice_rank)
        return self

    def to_fan(self) -> Fan:
        return _fan(self.lattice_rank, self.maximal_cones)


class IntersectionSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    i: int = Field(..., ge=0)
    j: int = Field(..., ge=0)
    cones: List[ConeGens] = Field(default_factory=list)


class MapSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: List[Vector]
    target: FanSpec

    def to_matrix(self, source_rank: int) -> IntMat:
        return IntMat.from_rows(self.matrix, cols=source_rank)


class ProblemFile(BaseModel):
    """
    Top-level problem file.

    Exactly one of maximal_cones (a fan) or charts (an affine system of
    fans, with optional intersections) must be present. Chart indices in
    intersections are 0-based.
    """

    model_config = ConfigDict(extra="forbid")

    lattice_rank: int = Field(..., ge=1)
    description: Optional[str] = None
    maximal_cones: Optional[List[ConeGens]] = None
    charts: Optional[List[ConeGens]] = None
    intersections: Optional[List[IntersectionSpec]] = None
    sublattice: List[Vector] = Field(default_factory=list)
    map: Optional[MapSpec] = None

    @model_validator(mode="after")
    def check_shape(self):
        n = self.lattice_rank
        if (self.maximal_cones is None) == (self.charts is None):
            raise PydanticCustomError(
                "structure", "{path}: give exactly one of maximal_cones or charts", {"path": "maximal_cones"}
            )
        if self.intersections is not None and self.charts is None:
            raise PydanticCustomError(
                "structure", "{path}: intersections need charts", {"path": "intersections"}
            )
        cones = self.maximal_cones if self.maximal_cones is not None else self.charts
        field = "maximal_cones" if self.maximal_cones is not None else "charts"
        for c, cone in enumerate(cones):
            _check_lengths(f"{field}.{c}", cone, n)
        for k, entry in enumerate(self.intersections or []):
            for c, cone in enumerate(entry.cones):
                _check_lengths(f"intersections.{k}.cones.{c}", cone, n)
        _check_lengths("sublattice", self.sublattice, n)
        if self.map is not None:
            if len(self.map.matrix) != self.map.target.lattice_rank:
                raise PydanticCustomError(
                    "map_shape",
                    "{path}: matrix has {rows} rows for a target of rank {rank}",
                    {"path": "map.matrix", "rows": len(self.map.matrix), "rank": self.map.target.lattice_rank},
                )
            _check_lengths("map.matrix", self.map.matrix, n)
        return self

    @property
    def is_fan(self) -> bool:
        return self.maximal_cones is not None

    def structure(self) -> Union[Fan, AffineSystemOfFans]:
        """The validated fan or affine system of fans."""
        n = self.lattice_rank
        if self.is_fan:
            return _fan(n, self.maximal_cones)
        intersections = {
            (entry.i, entry.j): [cone_from_generators(n, gens) for gens in entry.cones]
            for entry in self.intersections or []
        }
        return validate_system(n, [cone_from_generators(n, gens) for gens in self.charts], intersections)

    def action(self) -> SubtorusAction:
        return make_action(self.structure(), self.sublattice)

    def target_map(self) -> Optional[IntMat]:
        return self.map.to_matrix(self.lattice_rank) if self.map is not None else None

    def target_fan(self) -> Optional[Fan]:
        return self.map.target.to_fan() if self.map is not None else None


def _location(error: dict) -> str:
    ctx = error.get("ctx") or {}
    if "path" in ctx:
        return str(ctx["path"])
    return ".".join(str(part) for part in error["loc"]) or "<root>"


def parse_problem(text: str, source: str = "<input>") -> ProblemFile:
    """Parse problem-file text; every failure becomes a ProblemFileError."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from exc
    try:
        return ProblemFile.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        message = first["msg"]
        location = _location(first)
        if message.startswith(f"{location}: "):
            message = message[len(location) + 2 :]
        raise ProblemFileError(location, message) from exc


def load_problem(path: Union[str, Path]) -> ProblemFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(str(path), f"cannot read file: {exc.strerror}") from exc
    return parse_problem(text, source=str(path))


def dump_problem(problem: ProblemFile) -> str:
    """Serialize with sorted keys; parse_problem(dump_problem(p)) == p."""
    payload = problem.model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
