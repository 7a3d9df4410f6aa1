"""
Value types for subtorus actions, quotient constructions and their reports.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

from toriq.models.cone import Cone
from toriq.models.fan import AffineSystemOfFans, Fan, LabelledCone
from toriq.models.lattice import IntMat, IntVec, Sublattice


class Rule(str, enum.Enum):
    """Enlargement rules of the Hhat fixpoint."""

    OPPOSITE_FACES = "R1"
    LINE_IN_CLASS = "R2"


class AvQuotient(str, enum.Enum):
    EXISTS_EQUALS_TV = "ExistsEqualsTV"
    UNKNOWN = "Unknown"


class DiagnosisFlag(str, enum.Enum):
    NOT_WEAKLY_PROPER = "NotWeaklyProper"
    IMAGE_NOT_OPEN = "ImageNotOpen"
    GLUEING_DEFICIENCY = "GlueingDeficiency"


class ObstructionPattern(str, enum.Enum):
    NONE = "none"
    NON_OPEN_IMAGE = "non_open_image"
    UNGLUED_IDENTIFICATION = "unglued_identification"


@dataclass(frozen=True)
class CoverWitness:
    """Outcome of a cover decision; gap_point is set iff not covered."""

    covered: bool
    gap_point: Optional[IntVec] = None
    cell_count: int = 0
    target: Optional[Cone] = None


@dataclass(frozen=True)
class SubtorusAction:
    """A subtorus, given by a saturated sublattice, acting on a toric prevariety."""

    space: AffineSystemOfFans
    lattice: Sublattice
    fan: Optional[Fan] = None

    @property
    def ambient_rank(self) -> int:
        return self.space.ambient_rank


@dataclass(frozen=True)
class RuleApplication:
    rule: Rule
    charts: Tuple[int, ...]
    faces: Tuple[Cone, ...]
    vectors: Tuple[IntVec, ...]
    lifted_from_face: bool
    rank_after: int


@dataclass(frozen=True)
class HhatResult:
    lattice: Sublattice
    projection: IntMat
    trace: Tuple[RuleApplication, ...] = ()

    @property
    def codim(self) -> int:
        return self.lattice.ambient_rank - self.lattice.rank

    @property
    def certified(self) -> bool:
        return self.codim <= 2


@dataclass(frozen=True)
class MergeStep:
    """One step of the quotient fan repair: a cone grown, or a class absorbed."""

    kind: str
    classes: Tuple[int, ...]
    cone: Cone


@dataclass(frozen=True)
class ChainFailure:
    face: Cone
    components: Tuple[Tuple[LabelledCone, ...], ...]


@dataclass(frozen=True)
class TargetCoordinates:
    """The quotient fan re-expressed through a user-supplied target map Q = G P."""

    matrix: IntMat
    change: IntMat
    quotient_fan: Fan


@dataclass(frozen=True)
class SeparationResult:
    projection: IntMat
    quotient_fan: Fan
    class_of: Tuple[int, ...]
    cone_of_class: Tuple[Cone, ...]
    hhat: HhatResult
    merges: Tuple[MergeStep, ...] = ()
    chain_failures: Tuple[ChainFailure, ...] = ()
    target_coordinates: Optional[TargetCoordinates] = None

    @property
    def codim(self) -> int:
        return self.projection.n_rows

    @property
    def certified(self) -> bool:
        return self.codim <= 2 and not self.chain_failures


@dataclass(frozen=True)
class FaceImage:
    cone: Cone
    in_image: bool
    fibre: Tuple[LabelledCone, ...] = ()


@dataclass(frozen=True)
class OrbitImageReport:
    faces: Tuple[FaceImage, ...]
    surjective: bool
    image_open: bool
    missing_faces: Tuple[Cone, ...] = ()


@dataclass(frozen=True)
class GlueingWitness:
    """A quotient orbit reached from charts i and j but not from their glueing data."""

    face: Cone
    chart_i: int
    chart_j: int
    source_i: Cone
    source_j: Cone


@dataclass(frozen=True)
class TpQuotientResult:
    projection: IntMat
    system: AffineSystemOfFans
    dropped: Tuple[Tuple[int, int, Cone], ...] = ()


@dataclass(frozen=True)
class DiagnosisReport:
    codim: int
    av_quotient: AvQuotient
    flags: Tuple[DiagnosisFlag, ...]
    pattern: ObstructionPattern
    separation: SeparationResult
    weak_properness: CoverWitness
    orbit_image: OrbitImageReport
    glueing: Tuple[GlueingWitness, ...] = ()
    notes: Tuple[str, ...] = field(default=())
