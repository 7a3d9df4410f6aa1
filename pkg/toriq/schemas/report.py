"""
Pydantic schemas for command reports.

Each command emits one CommandReport subclass; JSON output is its
model_dump(mode="json") with sorted keys.
"""
from __future__ import annotations

from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field

from toriq.schemas.problem import Vector


class ConeSchema(BaseModel):
    rays: List[Vector]
    lineality: Optional[List[Vector]] = None
    dim: int


class LabelledConeSchema(BaseModel):
    chart: int
    rays: List[Vector]


class FanSchema(BaseModel):
    lattice_rank: int
    maximal_cones: List[List[Vector]]


class IntersectionSchema(BaseModel):
    i: int
    j: int
    cones: List[List[Vector]]


class SystemSchema(BaseModel):
    lattice_rank: int
    charts: List[List[Vector]]
    intersections: List[IntersectionSchema] = []


class CoverSchema(BaseModel):
    covered: bool
    gap_point: Optional[Vector] = None
    cell_count: int = 0
    target: Optional[ConeSchema] = None


class RuleApplicationSchema(BaseModel):
    rule: str
    charts: List[int]
    faces: List[ConeSchema]
    vectors: List[Vector]
    lifted_from_face: bool
    rank_after: int


class HhatSchema(BaseModel):
    lattice: List[Vector]
    projection: List[Vector]
    codim: int
    certified: bool
    trace: List[RuleApplicationSchema] = []


class MergeStepSchema(BaseModel):
    kind: str
    classes: List[int]
    cone: ConeSchema


class ChainFailureSchema(BaseModel):
    face: ConeSchema
    components: List[List[LabelledConeSchema]]


class TargetCoordinatesSchema(BaseModel):
    matrix: List[Vector]
    change: List[Vector]
    quotient_fan: FanSchema


class SeparationSchema(BaseModel):
    projection: List[Vector]
    codim: int
    certified: bool
    quotient_fan: FanSchema
    class_of: List[int]
    cone_of_class: List[ConeSchema]
    hhat: HhatSchema
    merges: List[MergeStepSchema] = []
    chain_failures: List[ChainFailureSchema] = []
    target_coordinates: Optional[TargetCoordinatesSchema] = None


class FaceImageSchema(BaseModel):
    cone: ConeSchema
    in_image: bool
    fibre: List[LabelledConeSchema] = []


class OrbitImageSchema(BaseModel):
    faces: List[FaceImageSchema]
    surjective: bool
    image_open: bool
    missing_faces: List[ConeSchema] = []


class GlueingWitnessSchema(BaseModel):
    face: ConeSchema
    chart_i: int
    chart_j: int
    source_i: ConeSchema
    source_j: ConeSchema


class DroppedConeSchema(BaseModel):
    i: int
    j: int
    cone: ConeSchema


class TpQuotientSchema(BaseModel):
    projection: List[Vector]
    system: SystemSchema
    dropped: List[DroppedConeSchema] = []


class CommandReport(BaseModel):
    """Common envelope: the command name and the problem description."""

    command: str
    description: Optional[str] = None


class ValidateReport(CommandReport):
    valid: bool = True
    kind: str
    structure: Union[SystemSchema, FanSchema]
    target: Optional[FanSchema] = None
    assignment: Optional[List[int]] = None


class HhatReport(CommandReport):
    hhat: HhatSchema
    non_separated_pairs: List[List[int]] = []
    classes: List[List[int]] = []


class SeparationReport(CommandReport):
    separation: SeparationSchema


class TpQuotientReport(CommandReport):
    tp_quotient: TpQuotientSchema


class ImageReport(CommandReport):
    matrix: List[Vector]
    target: FanSchema
    weak_properness: CoverSchema
    orbit_image: OrbitImageSchema


class DiagnosisReportSchema(CommandReport):
    codim: int
    av_quotient: str
    flags: List[str]
    pattern: str
    notes: List[str]
    separation: SeparationSchema
    weak_properness: CoverSchema
    orbit_image: OrbitImageSchema
    glueing: List[GlueingWitnessSchema] = []


class SlicePlotReport(CommandReport):
    out: str
    hyperplane: List[int]
    level: str
    regions: int
    polygons: List[List[List[str]]] = Field(default_factory=list)


class FixtureSchema(BaseModel):
    name: str
    description: str


class ExamplesReport(CommandReport):
    fixtures: List[FixtureSchema]


class ErrorReport(BaseModel):
    error: str
    message: str
    details: Dict[str, Any] = {}
