"""
Quotient service: the Hhat enlargement fixpoint, equivalence classes of
charts, invariant separations, the TV-quotient with its fan repair loop
and the naive prevariety quotient.

Projected cones live in Z^codim via the canonical projection of the
current sublattice. Chart indices are 0-based throughout.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from toriq.core.exceptions import (
    ChainConditionFailure,
    ClassUnionNotStrictlyConvex,
    DimensionMismatch,
    FanConditionViolation,
    Unsupported,
    UnsupportedCodimension,
    ValidationFailure,
)
from toriq.models.cone import Cone
from toriq.models.fan import AffineSystemOfFans, Fan, LabelledCone
from toriq.models.lattice import IntMat, IntVec, Sublattice, as_intvec
from toriq.models.quotient import (
    ChainFailure,
    HhatResult,
    MergeStep,
    Rule,
    RuleApplication,
    SeparationResult,
    SubtorusAction,
    TargetCoordinates,
    TpQuotientResult,
)
from toriq.services.cones import (
    contains_cone,
    face_cones,
    hull,
    image_cone,
    intersect,
    is_face,
    materialize,
    minimal_face_containing,
    negate,
    preimage_of_ray,
    relint_contains,
    relint_sample,
    relints_intersect,
)
from toriq.services.covering import cone_covered_by, ordered_map
from toriq.services.exactlin import (
    change_of_coordinates,
    join,
    primitive,
    quotient_projection,
    right_inverse,
    saturate,
    span,
)
from toriq.services.fans import (
    all_cones,
    as_system,
    glueing_cones,
    labelled_cones,
    transform_fan,
    validate_fan,
    validate_system,
)

logger = logging.getLogger(__name__)


def make_action(
    space: Union[Fan, AffineSystemOfFans], lattice: Union[Sublattice, Sequence[Sequence[int]]]
) -> SubtorusAction:
    """Build a subtorus action; the sublattice is saturated on the way in."""
    system = as_system(space)
    n = system.ambient_rank
    L = lattice if isinstance(lattice, Sublattice) else span(n, lattice)
    if L.ambient_rank != n:
        raise DimensionMismatch(f"sublattice of Z^{L.ambient_rank} acting on a space in Z^{n}")
    L = saturate(L)
    if L.rank >= n:
        raise ValidationFailure("the subtorus must be a proper subtorus", rank=L.rank)
    return SubtorusAction(
        space=system, lattice=L, fan=space if isinstance(space, Fan) else None
    )


def _chart_images(system: AffineSystemOfFans, P: IntMat) -> List[Cone]:
    return [image_cone(P, chart) for chart in system.charts]


def _components(images: Sequence[Cone]) -> List[Tuple[int, ...]]:
    """Classes of the relint-intersection graph, ordered by smallest member."""
    graph = nx.Graph()
    graph.add_nodes_from(range(len(images)))
    for i, j in itertools.combinations(range(len(images)), 2):
        if relints_intersect(images[i], images[j]):
            graph.add_edge(i, j)
    return sorted(tuple(sorted(c)) for c in nx.connected_components(graph))


def non_separated_pairs(action: SubtorusAction) -> List[Tuple[int, int]]:
    """Chart pairs i < j whose projected relative interiors meet."""
    P = quotient_projection(action.ambient_rank, action.lattice)
    images = _chart_images(action.space, P)
    return [
        (i, j)
        for i, j in itertools.combinations(range(len(images)), 2)
        if relints_intersect(images[i], images[j])
    ]


def equivalence_classes(action: SubtorusAction, lattice: Sublattice) -> List[Tuple[int, ...]]:
    P = quotient_projection(action.ambient_rank, saturate(lattice))
    return _components(_chart_images(action.space, P))


def _lift_into(face: Cone, L: Sublattice, R: IntMat, direction: Sequence[int]) -> IntVec:
    """A primitive point of face's relative interior projecting onto ray(direction)."""
    lift = as_intvec(R.apply(direction))
    piece = intersect(face, preimage_of_ray(lift, L.basis))
    return primitive(relint_sample(piece))


def _opposite_faces(
    action: SubtorusAction, L: Sublattice, P: IntMat, R: IntMat
) -> Optional[Tuple[Sublattice, RuleApplication]]:
    charts = action.space.charts
    images = _chart_images(action.space, P)
    for i, j in itertools.combinations_with_replacement(range(len(charts)), 2):
        if not relints_intersect(images[i], images[j]):
            continue
        for tau_i in face_cones(charts[i]):
            image_i = image_cone(P, tau_i)
            if image_i.is_zero:
                continue
            for tau_j in face_cones(charts[j]):
                image_j = image_cone(P, tau_j)
                if image_j.is_zero:
                    continue
                opposite = negate(image_j)
                if not relints_intersect(image_i, opposite):
                    continue
                delta = intersect(image_i, opposite)
                if delta.is_zero:
                    continue
                u = relint_sample(delta)
                if not any(u):
                    u = delta.lineality_basis[0]
                v_i = _lift_into(tau_i, L, R, u)
                v_j = _lift_into(tau_j, L, R, tuple(-x for x in u))
                enlarged = join(L, [v_i, v_j])
                logger.debug("R1 fires on charts %d, %d: faces %s and %s", i, j, tau_i, tau_j)
                return enlarged, RuleApplication(
                    rule=Rule.OPPOSITE_FACES,
                    charts=(i, j),
                    faces=(tau_i, tau_j),
                    vectors=(v_i, v_j),
                    lifted_from_face=True,
                    rank_after=enlarged.rank,
                )
    return None


def _absorb_line(
    action: SubtorusAction,
    L: Sublattice,
    P: IntMat,
    R: IntMat,
    members: Sequence[int],
    line: IntVec,
) -> Tuple[Sublattice, RuleApplication]:
    """Add a lattice vector over the line direction, lifted inside a chart face when possible."""
    charts = action.space.charts
    for i in members:
        for face in face_cones(charts[i]):
            image = image_cone(P, face)
            for direction in (line, tuple(-x for x in line)):
                if relint_contains(image, direction):
                    v = _lift_into(face, L, R, direction)
                    enlarged = join(L, [v])
                    return enlarged, RuleApplication(
                        rule=Rule.LINE_IN_CLASS,
                        charts=(i,),
                        faces=(face,),
                        vectors=(v,),
                        lifted_from_face=True,
                        rank_after=enlarged.rank,
                    )
    v = as_intvec(R.apply(line))
    enlarged = join(L, [v])
    return enlarged, RuleApplication(
        rule=Rule.LINE_IN_CLASS,
        charts=tuple(members),
        faces=(),
        vectors=(v,),
        lifted_from_face=False,
        rank_after=enlarged.rank,
    )


def _line_in_class(
    action: SubtorusAction, L: Sublattice, P: IntMat, R: IntMat
) -> Optional[Tuple[Sublattice, RuleApplication]]:
    images = _chart_images(action.space, P)
    for members in _components(images):
        union = hull(P.n_rows, [images[i] for i in members])
        if union.is_strictly_convex:
            continue
        logger.debug("R2 fires on class %s: %s contains a line", members, union)
        return _absorb_line(action, L, P, R, members, union.lineality_basis[0])
    return None


def compute_hhat(action: SubtorusAction) -> HhatResult:
    """
    Enlarge L until neither rule fires.

    R1: faces of non-separated charts with opposite projected directions.
    R2: a class whose projected union contains a line. One firing per
    round; each firing raises the rank, so at most ambient_rank rounds.
    """
    n = action.ambient_rank
    L = saturate(action.lattice)
    trace: List[RuleApplication] = []
    while L.rank < n:
        P = quotient_projection(n, L)
        R = right_inverse(P)
        step = _opposite_faces(action, L, P, R) or _line_in_class(action, L, P, R)
        if step is None:
            break
        L, application = step
        trace.append(application)
    result = HhatResult(lattice=L, projection=quotient_projection(n, L), trace=tuple(trace))
    logger.debug("Hhat reached rank %d (codim %d) after %d firings", L.rank, result.codim, len(trace))
    return result


def _chain_failure(
    rho: Cone, labels: Sequence[LabelledCone], images: Sequence[Cone]
) -> Optional[ChainFailure]:
    sample_in = [relint_contains(rho, relint_sample(image)) for image in images]
    endpoints = [k for k, inside in enumerate(sample_in) if inside]
    if len(endpoints) <= 1:
        return None
    nodes = [k for k, image in enumerate(images) if contains_cone(rho, image)]
    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    for a, b in itertools.combinations(nodes, 2):
        if images[a] == images[b] or relints_intersect(images[a], images[b]):
            graph.add_edge(a, b)
    touched = []
    for component in nx.connected_components(graph):
        hit = sorted(k for k in component if sample_in[k])
        if hit:
            touched.append(tuple(labels[k] for k in hit))
    if len(touched) <= 1:
        return None
    touched.sort(key=lambda group: (group[0].chart, group[0].cone.generators))
    return ChainFailure(face=rho, components=tuple(touched))


def chain_condition(
    action: SubtorusAction, lattice: Sublattice, quotient_fan: Fan
) -> List[ChainFailure]:
    """
    For every quotient cone rho, the labelled cones whose projected relative
    interior lies in rho's must be linked by chains of labelled cones inside
    rho with pairwise meeting projected relative interiors.
    """
    P = quotient_projection(action.ambient_rank, saturate(lattice))
    labels = labelled_cones(action.space)
    images = [image_cone(P, label.cone) for label in labels]
    results = ordered_map(lambda rho: _chain_failure(rho, labels, images), all_cones(quotient_fan))
    return [failure for failure in results if failure is not None]


def _class_map(count: int, classes: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    class_of = [0] * count
    for class_id, members in enumerate(classes):
        for i in members:
            class_of[i] = class_id
    return tuple(class_of)


def compute_separation(action: SubtorusAction) -> SeparationResult:
    """
    The invariant separation X -> X_Delta given by the projection modulo Hhat.

    Codimension at most two is certified. Beyond that the checks still
    run, and any failure is reported as UnsupportedCodimension.
    """
    hhat = compute_hhat(action)
    P = hhat.projection
    codim = P.n_rows
    images = _chart_images(action.space, P)
    classes = _components(images)
    cones = [hull(codim, [images[i] for i in members]) for members in classes]

    for class_id, (members, cone) in enumerate(zip(classes, cones)):
        covered = cone.is_strictly_convex and cone_covered_by(cone, [images[i] for i in members]).covered
        if not covered:
            if codim <= 2:
                raise ClassUnionNotStrictlyConvex(class_id, cone)
            raise UnsupportedCodimension(
                codim, "union of a class is not a strictly convex cone", class_id=class_id, cone=cone
            )

    try:
        fan = validate_fan(cones, codim)
    except FanConditionViolation as exc:
        if codim <= 2:
            raise
        raise UnsupportedCodimension(
            codim, "class cones do not form a fan", first=exc.details["first"], second=exc.details["second"]
        ) from exc

    failures = chain_condition(action, hhat.lattice, fan)
    if failures:
        first = failures[0]
        if codim <= 2:
            raise ChainConditionFailure(first.face, list(first.components))
        raise UnsupportedCodimension(codim, "chain condition fails", face=first.face)
    if codim > 2:
        logger.warning("separation of codimension %d is not certified", codim)

    return SeparationResult(
        projection=P,
        quotient_fan=fan,
        class_of=_class_map(len(images), classes),
        cone_of_class=tuple(cones),
        hhat=hhat,
    )


def _repair(
    codim: int, cones: List[Cone], classes: List[List[int]]
) -> Tuple[List[Cone], List[List[int]], List[MergeStep], Optional[Cone]]:
    """
    Grow class cones until pairwise intersections are common faces.

    Returns the cones, the classes, the merge trace and the first cone
    found to contain a line (None when all stay strictly convex).
    """
    merges: List[MergeStep] = []
    while True:
        absorbed = next(
            (
                (a, b)
                for a, b in itertools.permutations(range(len(cones)), 2)
                if contains_cone(cones[b], cones[a])
            ),
            None,
        )
        if absorbed is not None:
            a, b = absorbed
            merges.append(MergeStep(kind="absorb", classes=(a, b), cone=cones[b]))
            classes[b] = sorted(classes[a] + classes[b])
            del cones[a], classes[a]
            continue

        clash = next(
            (
                (a, b)
                for a, b in itertools.combinations(range(len(cones)), 2)
                if not _common_face(cones[a], cones[b])
            ),
            None,
        )
        if clash is None:
            return cones, classes, merges, None
        a, b = clash
        delta = intersect(cones[a], cones[b])
        grown_a = hull(codim, [cones[a], materialize(minimal_face_containing(cones[b], delta))])
        grown_b = hull(codim, [cones[b], materialize(minimal_face_containing(cones[a], delta))])
        cones[a], cones[b] = grown_a, grown_b
        merges.append(MergeStep(kind="grow", classes=(a,), cone=grown_a))
        merges.append(MergeStep(kind="grow", classes=(b,), cone=grown_b))
        logger.debug("fan repair grows classes %d and %d around %s", a, b, delta)
        for cone in (grown_a, grown_b):
            if not cone.is_strictly_convex:
                return cones, classes, merges, cone


def _common_face(first: Cone, second: Cone) -> bool:
    meet = intersect(first, second)
    return is_face(meet, first) and is_face(meet, second)


def _target_coordinates(P: IntMat, target: Optional[IntMat], fan: Fan) -> Optional[TargetCoordinates]:
    if target is None:
        return None
    try:
        G = change_of_coordinates(P, target)
    except (DimensionMismatch, ValidationFailure) as exc:
        logger.info("target map does not share the quotient kernel: %s", exc)
        return None
    return TargetCoordinates(matrix=target, change=G, quotient_fan=transform_fan(G, fan))


def tv_quotient(action: SubtorusAction, target: Optional[IntMat] = None) -> SeparationResult:
    """
    The quotient in the category of toric varieties.

    Class cones violating the fan condition are grown by the smallest
    face of the other cone containing their intersection, and cones
    inside another are absorbed with their classes. A line produced on
    the way is fed back through R2, and the computation restarts.
    """
    if action.fan is None:
        raise ValidationFailure("the TV-quotient is built for actions on a fan")
    n = action.ambient_rank
    extra: List[RuleApplication] = []
    current = action
    while True:
        hhat = compute_hhat(current)
        L, P = hhat.lattice, hhat.projection
        codim = P.n_rows
        images = _chart_images(action.space, P)
        classes = [list(members) for members in _components(images)]
        cones = [hull(codim, [images[i] for i in members]) for members in classes]
        cones, classes, merges, line_cone = _repair(codim, cones, classes)
        if line_cone is None:
            break
        members = sorted(i for group in classes for i in group if contains_cone(line_cone, images[i]))
        L, application = _absorb_line(
            current, L, P, right_inverse(P), members, line_cone.lineality_basis[0]
        )
        extra.extend(hhat.trace)
        extra.append(application)
        logger.debug("fan repair met a line; restarting with rank %d", L.rank)
        current = replace(current, lattice=L)

    order = sorted(range(len(classes)), key=lambda k: min(classes[k]))
    classes = [sorted(classes[k]) for k in order]
    cones = [cones[k] for k in order]
    fan = validate_fan(cones, codim)

    failures = chain_condition(action, L, fan)
    if failures and codim <= 2:
        first = failures[0]
        raise ChainConditionFailure(first.face, list(first.components))
    if codim > 2:
        logger.warning("TV-quotient of codimension %d is not certified", codim)

    hhat = HhatResult(lattice=L, projection=P, trace=tuple(extra) + hhat.trace)
    return SeparationResult(
        projection=P,
        quotient_fan=fan,
        class_of=_class_map(len(images), classes),
        cone_of_class=tuple(cones),
        hhat=hhat,
        merges=tuple(merges),
        chain_failures=tuple(failures),
        target_coordinates=_target_coordinates(P, target, fan),
    )


def naive_tp_quotient(action: SubtorusAction) -> TpQuotientResult:
    """
    Project every chart and glueing cone modulo saturate(L), without any
    enlargement, and validate the result as an affine system of fans.

    Projected glueing cones that are not faces of both projected charts
    are dropped and reported.
    """
    n = action.ambient_rank
    system = action.space
    P = quotient_projection(n, saturate(action.lattice))
    charts = _chart_images(system, P)
    for i, chart in enumerate(charts):
        if not chart.is_strictly_convex:
            raise Unsupported("projected chart is not strictly convex", chart=i, cone=chart)

    intersections: Dict[Tuple[int, int], List[Cone]] = {}
    dropped: List[Tuple[int, int, Cone]] = []
    for i, j in itertools.combinations(range(len(charts)), 2):
        kept: List[Cone] = []
        for sigma in glueing_cones(system, i, j):
            image = image_cone(P, sigma)
            if is_face(image, charts[i]) and is_face(image, charts[j]):
                if image not in kept:
                    kept.append(image)
            elif (i, j, image) not in dropped:
                dropped.append((i, j, image))
        intersections[(i, j)] = kept

    try:
        projected = validate_system(P.n_rows, charts, intersections)
    except ValidationFailure as exc:
        raise Unsupported(f"projected system is invalid: {exc.message}", violation=exc.kind) from exc
    if dropped:
        logger.info("naive TP-quotient dropped %d glueing cones", len(dropped))
    return TpQuotientResult(projection=P, system=projected, dropped=tuple(dropped))


def restrict_to_open_orbit_preimage(
    action: SubtorusAction, separation: SeparationResult
) -> SubtorusAction:
    """The same subtorus acting on the preimage of the open orbit of the quotient."""
    if action.fan is None:
        raise ValidationFailure("restriction to the open orbit preimage needs an action on a fan")
    P = separation.projection
    cones: List[Cone] = []
    for sigma in all_cones(action.fan):
        if image_cone(P, sigma).is_zero and sigma not in cones:
            cones.append(sigma)
    fan = validate_fan(cones, action.ambient_rank)
    return make_action(fan, action.lattice)
