import pytest
from conftest import cone

from toriq.core.config import settings
from toriq.core.exceptions import CoverPrecondition, Unsupported
from toriq.models.lattice import IntMat
from toriq.services.cones import cone_from_generators, contains, faces
from toriq.services.covering import (
    cone_covered_by,
    is_weakly_proper,
    lemma_conecover_check,
    ordered_map,
)
from toriq.services.fans import validate_fan, validate_fan_map

QUADRANT = cone((1, 0), (0, 1))
LOWER = cone((1, 0), (1, 1))
UPPER = cone((1, 1), (0, 1))


def test_subdivision_covers():
    witness = cone_covered_by(QUADRANT, [LOWER, UPPER])
    assert witness.covered
    assert witness.gap_point is None


def test_gap_point_outside_every_piece():
    witness = cone_covered_by(QUADRANT, [LOWER])
    assert not witness.covered
    assert witness.gap_point == (1, 2)
    assert contains(QUADRANT, witness.gap_point)
    assert not contains(LOWER, witness.gap_point)


def test_lower_dimensional_pieces_never_cover():
    witness = cone_covered_by(QUADRANT, [cone((1, 0)), cone((0, 1)), cone((1, 1))])
    assert not witness.covered


def test_non_strictly_convex_cover():
    halfplane = cone_from_generators(2, [(0, 1)], [(1, 0)])
    assert cone_covered_by(QUADRANT, [halfplane]).covered


def test_cover_of_lower_dimensional_cone():
    face = cone((1, 0, 0), (0, 1, 0))
    pieces = [cone((1, 0, 0), (1, 1, 0), (0, 0, 1)), cone((1, 1, 0), (0, 1, 0), (0, 0, 1))]
    assert cone_covered_by(face, pieces).covered
    assert not cone_covered_by(face, pieces[:1]).covered


def test_cell_limit(monkeypatch):
    monkeypatch.setattr(settings, "TORIQ_MAX_CELLS", 1)
    with pytest.raises(Unsupported):
        cone_covered_by(QUADRANT, [LOWER, UPPER])


def test_lemma_holds_for_a_subdivision():
    ray_face = faces(QUADRANT)[1]
    assert lemma_conecover_check(QUADRANT, ray_face, [LOWER, UPPER])
    assert lemma_conecover_check(QUADRANT, faces(QUADRANT)[0], [LOWER, UPPER])


def test_lemma_needs_a_cover():
    with pytest.raises(CoverPrecondition):
        lemma_conecover_check(QUADRANT, faces(QUADRANT)[1], [LOWER])


def test_weak_properness(problem):
    unglued_orbits = problem("unglued_orbits")
    fan_map = validate_fan_map(unglued_orbits.target_map(), unglued_orbits.structure(), unglued_orbits.target_fan())
    assert is_weakly_proper(fan_map).covered

    merged_orthant = problem("merged_orthant")
    fan_map = validate_fan_map(merged_orthant.target_map(), merged_orthant.structure(), merged_orthant.target_fan())
    witness = is_weakly_proper(fan_map)
    assert not witness.covered
    assert witness.gap_point == (4, 2, 1)


def test_weak_properness_of_a_projection():
    source = validate_fan([QUADRANT])
    fan_map = validate_fan_map(IntMat.from_rows([[1, 1]]), source, validate_fan([cone((1,))]))
    assert is_weakly_proper(fan_map).covered


def test_ordered_map_keeps_order(workers):
    workers(4)
    assert ordered_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]
