"""
Exception hierarchy for toriq.

Algorithm modules raise these; only the CLI maps them to exit codes.
Exit codes: 2 = validation failure, 3 = unsupported / uncertified.
"""
from typing import Any, Dict, List, Optional


class ToriqError(Exception):
    """Base error carrying a CLI exit code and a JSON-friendly payload."""

    exit_code = 1
    kind = "error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def payload(self) -> Dict[str, Any]:
        return {
            "error": self.kind,
            "message": self.message,
            "details": {key: _jsonable(value) for key, value in self.details.items()},
        }


def _jsonable(value: Any) -> Any:
    """Render cones, vectors and nested containers for error payloads."""
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, int) and not isinstance(value, bool) and abs(value) >= 2**53:
        return str(value)
    return value


class ValidationFailure(ToriqError):
    exit_code = 2
    kind = "validation_failure"


class DimensionMismatch(ValidationFailure):
    kind = "dimension_mismatch"


class NotSaturated(ValidationFailure):
    kind = "not_saturated"


class NotStrictlyConvex(ValidationFailure):
    kind = "not_strictly_convex"

    def __init__(self, cone: Any, message: Optional[str] = None):
        super().__init__(message or "cone is not strictly convex", cone=cone)
        self.cone = cone


class NotAFace(ValidationFailure):
    kind = "not_a_face"

    def __init__(self, cone: Any, parent: Any):
        super().__init__("cone is not a face of its parent", cone=cone, parent=parent)
        self.cone = cone
        self.parent = parent


class FanConditionViolation(ValidationFailure):
    kind = "fan_condition_violation"

    def __init__(self, first: Any, second: Any, intersection: Any):
        super().__init__(
            "intersection of two cones is not a face of both",
            first=first,
            second=second,
            intersection=intersection,
        )
        self.first = first
        self.second = second
        self.intersection = intersection


class SymmetryViolation(ValidationFailure):
    kind = "symmetry_violation"

    def __init__(self, i: int, j: int):
        super().__init__(f"intersection data for ({i},{j}) and ({j},{i}) differ", i=i, j=j)
        self.i = i
        self.j = j


class NotCommonFace(ValidationFailure):
    kind = "not_common_face"

    def __init__(self, i: int, j: int, cone: Any):
        super().__init__(
            f"glueing cone of ({i},{j}) is not a face of both charts", i=i, j=j, cone=cone
        )
        self.i = i
        self.j = j
        self.cone = cone


class TripleConditionViolation(ValidationFailure):
    kind = "triple_condition_violation"

    def __init__(self, i: int, j: int, k: int, cone: Any):
        super().__init__(
            f"cone lies in glueing data ({i},{j}) and ({j},{k}) but not in ({i},{k})",
            i=i,
            j=j,
            k=k,
            cone=cone,
        )
        self.i = i
        self.j = j
        self.k = k
        self.cone = cone


class NoTargetCone(ValidationFailure):
    kind = "no_target_cone"

    def __init__(self, cone: Any, chart: int):
        super().__init__(f"image of a cone of chart {chart} lies in no target cone", cone=cone, chart=chart)
        self.cone = cone
        self.chart = chart


class CoverPrecondition(ValidationFailure):
    kind = "cover_precondition"


class NonAffineSystem(ValidationFailure):
    kind = "non_affine_system"


class ProblemFileError(ValidationFailure):
    kind = "problem_file_error"

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}", location=location)
        self.location = location


class Unsupported(ToriqError):
    exit_code = 3
    kind = "unsupported"

    def __init__(self, reason: str, **details: Any):
        super().__init__(reason, **details)
        self.reason = reason


class UnsupportedCodimension(Unsupported):
    kind = "unsupported_codimension"

    def __init__(self, codim: int, reason: str, **details: Any):
        super().__init__(reason, codim=codim, **details)
        self.codim = codim


class ClassUnionNotStrictlyConvex(ToriqError):
    exit_code = 3
    kind = "class_union_not_strictly_convex"

    def __init__(self, class_id: int, cone: Any):
        super().__init__(f"union of class {class_id} is not a strictly convex cone", class_id=class_id, cone=cone)
        self.class_id = class_id
        self.cone = cone


class ChainConditionFailure(ToriqError):
    exit_code = 3
    kind = "chain_condition_failure"

    def __init__(self, face: Any, components: List[Any]):
        super().__init__(
            "labelled cones over a quotient face are not chain-connected",
            face=face,
            components=components,
        )
        self.face = face
        self.components = components
