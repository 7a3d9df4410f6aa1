from fractions import Fraction

import pytest
from conftest import cone
from svglib.svglib import svg2rlg

from toriq.core.exceptions import DimensionMismatch, ValidationFailure
from toriq.services.slice_plot import draw_slice, parse_level, slice_regions, write_slice_plot


def test_section_of_two_simplicial_cones(problem):
    cones = problem("unglued_orbits").structure().maximal_cones
    first, second = slice_regions(cones, (1, 0, 0), Fraction(1))
    assert set(first.points) == {(-1, 0), (0, 0), (1, 1)}
    assert set(second.points) == {(-1, -1), (0, 0), (1, 0)}
    assert (first.label, second.label) == ("0", "1")


def test_level_scales_vertices(problem):
    cones = problem("unglued_orbits").structure().maximal_cones
    (region, _) = slice_regions(cones, (1, 0, 0), Fraction(3, 2))
    assert set(region.points) == {(Fraction(-3, 2), 0), (0, 0), (Fraction(3, 2), Fraction(3, 2))}


def test_unbounded_sections_are_skipped(problem):
    cones = problem("nobasechange").structure().maximal_cones
    assert slice_regions(cones, (1, 0, 0), Fraction(1)) == []
    (region,) = slice_regions(cones, (1, 1, 1), Fraction(1))
    assert region.label == "1"
    assert set(region.points) == {(1, 0), (0, 1), (0, 0)}


def test_target_fan_section(problem):
    cones = problem("non_open_image").target_fan().maximal_cones
    regions = slice_regions(cones, (1, 0, 0), Fraction(1))
    assert [len(region.points) for region in regions] == [3, 3]


def test_non_positive_level_is_empty(problem):
    cones = problem("unglued_orbits").structure().maximal_cones
    assert slice_regions(cones, (1, 0, 0), Fraction(0)) == []
    assert slice_regions(cones, (1, 0, 0), Fraction(-1)) == []


def test_cone_below_the_plane_is_cut_at_negative_level(caplog):
    below = cone((-1, 0, 1), (-1, 1, 0), (-1, 0, 0))
    with caplog.at_level("WARNING"):
        (region,) = slice_regions([below], (1, 0, 0), Fraction(-1))
        assert slice_regions([below], (1, 0, 0), Fraction(1)) == []
    assert set(region.points) == {(0, 1), (1, 0), (0, 0)}
    assert "unbounded" not in caplog.text


def test_needs_rank_three():
    with pytest.raises(DimensionMismatch):
        slice_regions([cone((1, 0), (0, 1))], (1, 0, 0), Fraction(1))
    with pytest.raises(DimensionMismatch):
        slice_regions([cone((1, 0, 0))], (0, 0, 0), Fraction(1))


def test_parse_level():
    assert parse_level("3/2") == Fraction(3, 2)
    assert parse_level(" 2 ") == 2
    with pytest.raises(ValidationFailure):
        parse_level("abc")


def test_draw_slice_of_a_segment():
    regions = slice_regions([cone((1, 0, 0), (1, 1, 0))], (1, 0, 0), Fraction(1))
    drawing = draw_slice(regions, size=200)
    assert (drawing.width, drawing.height) == (200, 200)
    assert len(drawing.contents) == 2


def test_written_svg_reads_back(problem, tmp_path):
    out = tmp_path / "plots" / "unglued_orbits.svg"
    regions = write_slice_plot(problem("unglued_orbits").structure().maximal_cones, (1, 0, 0), Fraction(1), out)
    assert len(regions) == 2
    drawing = svg2rlg(str(out))
    assert drawing is not None
    assert drawing.width > 0
