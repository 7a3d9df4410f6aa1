import pytest
from conftest import cone

from toriq.core.exceptions import (
    DimensionMismatch,
    FanConditionViolation,
    NoTargetCone,
    NonAffineSystem,
    NotCommonFace,
    NotStrictlyConvex,
    SymmetryViolation,
    TripleConditionViolation,
)
from toriq.models.fan import LabelledCone
from toriq.models.lattice import IntMat
from toriq.services.cones import cone_from_generators, face_cones, zero_cone
from toriq.services.fans import (
    all_cones,
    fan_as_system,
    glueing_cones,
    isomorphic_up_to_relabel,
    labelled_cones,
    minimal_target_cone,
    support_membership,
    transform_fan,
    validate_fan,
    validate_fan_map,
    validate_system,
)

QUADRANT = cone((1, 0), (0, 1))
RAY = cone((1,))


def test_validate_fan_keeps_maximal_cones():
    fan = validate_fan([QUADRANT, cone((1, 0)), cone((0, 1), (-1, 0)), QUADRANT])
    assert fan.maximal_cones == (QUADRANT, cone((0, 1), (-1, 0)))


def test_empty_fan_is_the_origin():
    fan = validate_fan([], 3)
    assert fan.maximal_cones == (zero_cone(3),)
    with pytest.raises(DimensionMismatch):
        validate_fan([])


def test_fan_condition_violation():
    first = cone((1, 0, 0), (0, 1, 0))
    second = cone((0, 0, 1), (1, 1, 0))
    with pytest.raises(FanConditionViolation) as info:
        validate_fan([first, second])
    assert info.value.intersection == cone((1, 1, 0))
    assert info.value.payload()["details"]["intersection"] == {"rays": [[1, 1, 0]]}


def test_fan_needs_strictly_convex_cones():
    with pytest.raises(NotStrictlyConvex):
        validate_fan([cone_from_generators(2, [(0, 1)], [(1, 0)])])


def test_fan_rejects_mixed_ranks():
    with pytest.raises(DimensionMismatch):
        validate_fan([QUADRANT, cone((1, 0, 0))])


def test_all_cones():
    fan = validate_fan([QUADRANT, cone((0, 1), (-1, 0))])
    cones = all_cones(fan)
    assert len(cones) == 6
    assert cones[0] == zero_cone(2)
    assert cones[-2:] == [cone((-1, 0), (0, 1)), QUADRANT]


def test_support_membership():
    fan = validate_fan([QUADRANT])
    assert support_membership(fan, (3, 1))
    assert not support_membership(fan, (-1, 1))


def test_missing_pairs_glue_along_origin():
    system = validate_system(1, [RAY, RAY], {})
    assert glueing_cones(system, 0, 1) == [zero_cone(1)]
    assert glueing_cones(system, 1, 0) == [zero_cone(1)]


def test_glueing_data_closed_under_faces():
    system = validate_system(1, [RAY, RAY], {(0, 1): [RAY]})
    assert glueing_cones(system, 0, 1) == [zero_cone(1), RAY]
    assert system.glueing_maximal(0, 1) == (RAY,)


def test_glueing_cone_must_be_common_face():
    with pytest.raises(NotCommonFace):
        validate_system(2, [QUADRANT, cone((1, 1), (0, 1))], {(0, 1): [cone((1, 1))]})


def test_symmetric_glueing_data():
    with pytest.raises(SymmetryViolation):
        validate_system(1, [RAY, RAY], {(0, 1): [RAY], (1, 0): []})


def test_triple_condition():
    with pytest.raises(TripleConditionViolation) as info:
        validate_system(1, [RAY, RAY, RAY], {(0, 1): [RAY], (1, 2): [RAY]})
    assert (info.value.i, info.value.j, info.value.k) == (0, 1, 2)
    assert info.value.cone == RAY


def test_system_index_errors():
    with pytest.raises(NonAffineSystem):
        validate_system(1, [RAY, RAY], {(1, 1): [RAY]})
    with pytest.raises(DimensionMismatch):
        validate_system(1, [RAY, RAY], {(0, 2): [RAY]})


def test_fan_as_system_uses_intersections():
    first = cone((1, 0, 0), (1, -1, 0), (1, 1, 1))
    second = cone((1, 0, 0), (1, 1, 0), (1, -1, -1))
    system = fan_as_system(validate_fan([first, second]))
    assert glueing_cones(system, 0, 1) == [zero_cone(3), cone((1, 0, 0))]


def test_labelled_cones():
    system = fan_as_system(validate_fan([QUADRANT, cone((0, 1), (-1, 0))]))
    labels = labelled_cones(system)
    assert len(labels) == 8
    assert labels[0] == LabelledCone(cone=zero_cone(2), chart=0)
    assert labels[4] == LabelledCone(cone=zero_cone(2), chart=1)
    assert [label.cone for label in labels[:4]] == face_cones(QUADRANT)


def test_validate_fan_map_assigns_charts():
    source = validate_fan([cone((1, 0, 0), (1, -1, 0), (1, 1, 1)), cone((1, 0, 0), (1, 1, 0), (1, -1, -1))])
    target = validate_fan([cone((1, 1), (1, -1))])
    fan_map = validate_fan_map(IntMat.from_rows([[1, 0, 0], [0, 1, 0]]), source, target)
    assert fan_map.assignment == (0, 0)
    label = LabelledCone(cone=cone((1, -1, 0)), chart=0)
    assert minimal_target_cone(fan_map, label) == cone((1, -1))


def test_fan_map_onto_separated_system():
    source = validate_fan([cone((1, 0, 0), (1, -1, 0), (1, 1, 1)), cone((1, 0, 0), (1, 1, 0), (1, -1, -1))])
    fan = validate_fan([cone((1, 1), (1, -1)), cone((1, 1), (-1, 0))])
    fan_map = validate_fan_map(IntMat.from_rows([[1, 0, 0], [0, 1, 0]]), source, fan_as_system(fan))
    assert fan_map.target == fan
    assert fan_map.assignment == (0, 0)


def test_fan_map_rejects_unglued_target_system():
    target = validate_system(2, [QUADRANT, cone((0, 1), (-1, 0))], {})
    with pytest.raises(NonAffineSystem):
        validate_fan_map(IntMat.identity(2), validate_fan([QUADRANT]), target)


def test_fan_map_without_target_cone():
    target = validate_fan([cone((1,))])
    with pytest.raises(NoTargetCone) as info:
        validate_fan_map(IntMat.from_rows([[1, 0]]), validate_fan([QUADRANT, cone((-1, 0))]), target)
    assert info.value.chart == 1


def test_fan_map_shape():
    with pytest.raises(DimensionMismatch):
        validate_fan_map(IntMat.from_rows([[1, 0, 0]]), validate_fan([QUADRANT]), validate_fan([RAY]))


def test_transform_fan():
    G = IntMat.from_rows([[1, 1], [0, -1]])
    fan = transform_fan(G, validate_fan([QUADRANT]))
    assert fan.maximal_cones == (cone((1, 0), (1, -1)),)


def test_isomorphic_up_to_relabel():
    first = validate_system(2, [QUADRANT, cone((-1, 0))], {})
    second = validate_system(2, [cone((-1, 0)), QUADRANT], {})
    assert isomorphic_up_to_relabel(first, second)
    glued = validate_system(1, [RAY, RAY], {(0, 1): [RAY]})
    apart = validate_system(1, [RAY, RAY], {})
    assert not isomorphic_up_to_relabel(glued, apart)
