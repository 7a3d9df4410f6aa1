"""
Domain models - lattices, cones, fans and quotient results
"""
from toriq.models.lattice import IntMat, IntVec, RatVec, Sublattice
from toriq.models.cone import Cone, FaceId
from toriq.models.fan import AffineSystemOfFans, Fan, FanMap, LabelledCone
from toriq.models.quotient import (
    AvQuotient,
    ChainFailure,
    CoverWitness,
    DiagnosisFlag,
    DiagnosisReport,
    FaceImage,
    GlueingWitness,
    HhatResult,
    MergeStep,
    ObstructionPattern,
    OrbitImageReport,
    Rule,
    RuleApplication,
    SeparationResult,
    SubtorusAction,
    TargetCoordinates,
    TpQuotientResult,
)

# Export all for easy imports
__all__ = [
    "IntMat",
    "IntVec",
    "RatVec",
    "Sublattice",
    "Cone",
    "FaceId",
    "Fan",
    "FanMap",
    "LabelledCone",
    "AffineSystemOfFans",
    "Rule",
    "AvQuotient",
    "DiagnosisFlag",
    "ObstructionPattern",
    "CoverWitness",
    "SubtorusAction",
    "RuleApplication",
    "HhatResult",
    "MergeStep",
    "ChainFailure",
    "TargetCoordinates",
    "SeparationResult",
    "FaceImage",
    "OrbitImageReport",
    "GlueingWitness",
    "TpQuotientResult",
    "DiagnosisReport",
]
