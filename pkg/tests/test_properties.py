"""Randomised checks of the cone, cover and quotient algorithms."""
import itertools

import networkx as nx
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from toriq.core.exceptions import ToriqError
from toriq.schemas.problem import ProblemFile, dump_problem, parse_problem
from toriq.services.cones import (
    cone_from_generators,
    cone_from_inequalities,
    contains,
    contains_cone,
    dual,
    face_cones,
    faces,
    image_cone,
    intersect,
    negate,
    relint_contains,
    relint_sample,
    relints_intersect,
)
from toriq.services.covering import cone_covered_by, is_weakly_proper, lemma_conecover_check
from toriq.services.diagnosis import orbit_image
from toriq.services.exactlin import pairing, right_inverse
from toriq.services.fans import (
    all_cones,
    labelled_cones,
    minimal_target_cone,
    support_membership,
    validate_fan,
    validate_fan_map,
    validate_system,
)
from toriq.services.quotient import compute_hhat, compute_separation, make_action, tv_quotient
from toriq.utils.fixtures import load_fixture

RANDOM = settings(
    max_examples=500,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
POINTS = settings(
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

VALID_FIXTURES = ["hyperbolic", "nobasechange", "nobasechange_open", "merged_orthant", "non_open_image", "unglued_orbits"]


def vectors(n, min_size=1, max_size=4):
    entry = st.integers(min_value=-5, max_value=5)
    vector = st.lists(entry, min_size=n, max_size=n).filter(any)
    return st.lists(vector, min_size=min_size, max_size=max_size)


@st.composite
def cones(draw, ranks=(2, 3, 4), strictly_convex=False):
    n = draw(st.sampled_from(ranks))
    cone = cone_from_generators(n, draw(vectors(n)))
    if strictly_convex:
        assume(cone.is_strictly_convex)
    return cone


@st.composite
def points_in(draw, cone):
    coefficients = draw(st.lists(st.integers(0, 4), min_size=len(cone.generators), max_size=len(cone.generators)))
    shifts = draw(
        st.lists(st.integers(-4, 4), min_size=len(cone.lineality_basis), max_size=len(cone.lineality_basis))
    )
    point = [0] * cone.ambient_rank
    for c, g in zip(coefficients + shifts, cone.generators + cone.lineality_basis):
        point = [p + c * x for p, x in zip(point, g)]
    return point


@RANDOM
@given(cones())
def test_dual_from_facet_data(cone):
    assert cone_from_generators(cone.ambient_rank, cone.facet_normals, cone.equations) == dual(cone)


@RANDOM
@given(cones())
def test_relint_sample_is_interior(cone):
    assert relint_contains(cone, relint_sample(cone))


@RANDOM
@given(cones(strictly_convex=True))
def test_face_fan_has_one_maximal_cone(cone):
    assert tuple(validate_fan(face_cones(cone), cone.ambient_rank).maximal_cones) == (cone,)


@RANDOM
@given(st.sampled_from([2, 3]), st.data())
def test_cover_decision_agrees_with_sampling(n, data):
    tau = cone_from_generators(n, data.draw(vectors(n, max_size=3)))
    cover = [cone_from_generators(n, gens) for gens in data.draw(st.lists(vectors(n, max_size=3), max_size=3))]
    if data.draw(st.booleans()):
        h = data.draw(vectors(n, min_size=1, max_size=1))[0]
        cover.append(intersect(tau, cone_from_inequalities(n, [h])))
    witness = cone_covered_by(tau, cover)
    if witness.covered:
        point = data.draw(points_in(tau))
        assert any(contains(sigma, point) for sigma in cover)
    else:
        assert contains(tau, witness.gap_point)
        assert not any(contains(sigma, witness.gap_point) for sigma in cover)


@RANDOM
@given(cones(ranks=(2, 3), strictly_convex=True), st.data())
def test_halfspace_split_satisfies_cover_lemma(sigma, data):
    n = sigma.ambient_rank
    h = data.draw(vectors(n, min_size=1, max_size=1))[0]
    halves = [intersect(sigma, cone_from_inequalities(n, [side])) for side in (h, [-x for x in h])]
    proper = faces(sigma)[:-1]
    assume(proper)
    tau = data.draw(st.sampled_from(proper))
    assert lemma_conecover_check(sigma, tau, halves)


def _stellar(piece, coefficients):
    n = piece.ambient_rank
    centre = [sum(c * g[k] for c, g in zip(coefficients, piece.generators)) for k in range(n)]
    return [
        cone_from_generators(n, [centre] + [g for g in piece.generators if g != skipped])
        for skipped in piece.generators
    ]


@RANDOM
@given(cones(ranks=(2, 3), strictly_convex=True), st.data())
def test_simplicial_subdivision_satisfies_cover_lemma(sigma, data):
    assume(len(sigma.generators) == sigma.dim >= 2)
    pieces = [sigma]
    for _ in range(data.draw(st.integers(1, 3))):
        k = data.draw(st.integers(0, len(pieces) - 1))
        coefficients = data.draw(
            st.lists(st.integers(1, 3), min_size=len(pieces[k].generators), max_size=len(pieces[k].generators))
        )
        pieces[k : k + 1] = _stellar(pieces[k], coefficients)
    assert all(len(piece.generators) == piece.dim for piece in pieces)
    tau = data.draw(st.sampled_from(faces(sigma)[:-1]))
    assert lemma_conecover_check(sigma, tau, pieces)


def _chart_action(charts, lattice):
    try:
        system = validate_system(charts[0].ambient_rank, charts, {})
        return make_action(system, lattice)
    except ToriqError:
        assume(False)


@RANDOM
@given(cones(ranks=(2, 3), strictly_convex=True), st.data())
def test_hhat_is_idempotent(first, data):
    n = first.ambient_rank
    second = data.draw(cones(ranks=(n,), strictly_convex=True))
    action = _chart_action([first, second], data.draw(vectors(n, min_size=0, max_size=1)))
    result = compute_hhat(action)
    assume(result.lattice.rank < n)
    again = compute_hhat(make_action(action.space, result.lattice))
    assert again.trace == ()
    assert again.lattice == result.lattice


@RANDOM
@given(cones(ranks=(2, 3), strictly_convex=True), st.data())
def test_separation_is_sound(first, data):
    n = first.ambient_rank
    others = data.draw(st.lists(cones(ranks=(n,), strictly_convex=True), min_size=1, max_size=2))
    action = _chart_action([first, *others], data.draw(vectors(n, min_size=0, max_size=1)))
    try:
        assume(compute_hhat(action).lattice.rank < n)
        result = compute_separation(action)
    except ToriqError:
        assume(False)
    assume(result.codim > 0)
    P = result.projection
    for v in result.hhat.lattice.basis:
        assert all(x == 0 for x in P.apply(v))
    images = [image_cone(P, chart) for chart in action.space.charts]
    for chart, class_id in enumerate(result.class_of):
        assert contains_cone(result.cone_of_class[class_id], images[chart])
    for class_id, class_cone in enumerate(result.cone_of_class):
        members = [k for k, c in enumerate(result.class_of) if c == class_id]
        assert cone_covered_by(class_cone, [images[k] for k in members]).covered
        graph = nx.Graph()
        graph.add_nodes_from(members)
        graph.add_edges_from(
            (i, j) for i, j in itertools.combinations(members, 2) if relints_intersect(images[i], images[j])
        )
        assert nx.is_connected(graph)
    for i, j in itertools.combinations(range(len(images)), 2):
        if result.class_of[i] != result.class_of[j]:
            assert not relints_intersect(images[i], images[j])
    for a, b in itertools.combinations(result.cone_of_class, 2):
        assert not relints_intersect(a, b)
    R = right_inverse(P)
    assert P.compose(R).rows == tuple(
        tuple(int(i == j) for j in range(P.n_rows)) for i in range(P.n_rows)
    )


@RANDOM
@given(cones(ranks=(3,), strictly_convex=True), cones(ranks=(3,), strictly_convex=True), st.data())
def test_weakly_proper_maps_are_surjective(first, second, data):
    try:
        fan = validate_fan([first, second], 3)
        action = make_action(fan, data.draw(vectors(3, min_size=1, max_size=1)))
        assume(compute_hhat(action).lattice.rank < 3)
        separation = tv_quotient(action)
        fan_map = validate_fan_map(separation.projection, action.space, separation.quotient_fan)
    except ToriqError:
        assume(False)
    if is_weakly_proper(fan_map).covered:
        assert orbit_image(fan_map).surjective


def _small_fan(first, others):
    try:
        return validate_fan([first, *others], first.ambient_rank)
    except ToriqError:
        return validate_fan([first, negate(first)], first.ambient_rank)


@RANDOM
@given(cones(strictly_convex=True), st.data())
def test_fan_file_round_trip(first, data):
    n = first.ambient_rank
    fan = _small_fan(first, data.draw(st.lists(cones(ranks=(n,), strictly_convex=True), max_size=2)))
    entry = st.integers(min_value=-(2**62), max_value=2**62)
    sublattice = data.draw(st.lists(st.lists(entry, min_size=n, max_size=n), max_size=2))
    problem = ProblemFile(lattice_rank=n, maximal_cones=fan.to_dict()["maximal_cones"], sublattice=sublattice)
    text = dump_problem(problem)
    again = parse_problem(text)
    assert again == problem
    assert again.structure() == fan
    assert dump_problem(again) == text


def _in_cone_by_dual(sigma, point):
    d = dual(sigma)
    return all(pairing(u, point) >= 0 for u in d.generators) and all(
        pairing(line, point) == 0 for line in d.lineality_basis
    )


@pytest.mark.parametrize("name", VALID_FIXTURES)
@POINTS
@given(data=st.data())
def test_support_membership_agrees_with_cone_strata(name, data):
    fan = load_fixture(name).structure()
    n = fan.ambient_rank
    coordinate = st.fractions(min_value=-3, max_value=3, max_denominator=4)
    point = data.draw(st.lists(coordinate, min_size=n, max_size=n))
    strata = [rho for rho in all_cones(fan) if relint_contains(rho, point)]
    assert len(strata) <= 1
    by_dual = any(_in_cone_by_dual(sigma, point) for sigma in fan.maximal_cones)
    assert support_membership(fan, point) == bool(strata) == by_dual


@RANDOM
@given(cones(ranks=(3,), strictly_convex=True), cones(ranks=(3,), strictly_convex=True), st.data())
def test_minimal_target_cone_is_unique(first, second, data):
    fan = _small_fan(first, [second])
    try:
        action = make_action(fan, data.draw(vectors(3, min_size=1, max_size=1)))
        assume(compute_hhat(action).lattice.rank < 3)
        separation = tv_quotient(action)
        fan_map = validate_fan_map(separation.projection, action.space, separation.quotient_fan)
    except ToriqError:
        assume(False)
    targets = all_cones(fan_map.target)
    for label in labelled_cones(fan_map.source):
        image = image_cone(fan_map.matrix, label.cone)
        holders = [rho for rho in targets if contains_cone(rho, image)]
        smallest = minimal_target_cone(fan_map, label)
        assert smallest in holders
        minimal = [rho for rho in holders if all(contains_cone(other, rho) for other in holders)]
        assert minimal == [smallest]
