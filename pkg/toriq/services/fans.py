"""
Fan service: validation of fans, affine systems of fans and fan maps,
supports, labelled cones and changes of coordinates.
"""
from __future__ import annotations

import itertools
import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple, Union

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
from toriq.models.cone import Cone
from toriq.models.fan import AffineSystemOfFans, Fan, FanMap, LabelledCone
from toriq.models.lattice import IntMat
from toriq.services.cones import (
    cone_sort_key,
    contains,
    contains_cone,
    face_cones,
    image_cone,
    intersect,
    is_face,
    materialize,
    minimal_face_containing,
    transform_cone,
    zero_cone,
)

logger = logging.getLogger(__name__)


def _check_cone(ambient_rank: int, sigma: Cone) -> None:
    if sigma.ambient_rank != ambient_rank:
        raise DimensionMismatch(f"cone in Z^{sigma.ambient_rank} inside a structure in Z^{ambient_rank}")
    if not sigma.is_strictly_convex:
        raise NotStrictlyConvex(sigma)


def _maximal(cones: Sequence[Cone]) -> List[Cone]:
    return [
        sigma
        for sigma in cones
        if not any(other != sigma and contains_cone(other, sigma) for other in cones)
    ]


def validate_fan(cones: Sequence[Cone], ambient_rank: int | None = None) -> Fan:
    """
    Check strict convexity and the fan condition; keep the maximal cones.

    An empty list gives the fan consisting of {0} alone.
    """
    if ambient_rank is None:
        if not cones:
            raise DimensionMismatch("lattice rank is required for an empty fan")
        ambient_rank = cones[0].ambient_rank
    unique: List[Cone] = []
    for sigma in cones:
        _check_cone(ambient_rank, sigma)
        if sigma not in unique:
            unique.append(sigma)
    if not unique:
        unique = [zero_cone(ambient_rank)]

    for first, second in itertools.combinations(unique, 2):
        meet = intersect(first, second)
        if not (is_face(meet, first) and is_face(meet, second)):
            logger.debug("fan condition fails for %s and %s", first, second)
            raise FanConditionViolation(first, second, meet)

    # a cone inside another valid fan member is one of its faces
    return Fan(ambient_rank=ambient_rank, maximal_cones=tuple(_maximal(unique)))


@lru_cache(maxsize=1024)
def _all_cones(fan: Fan) -> Tuple[Cone, ...]:
    seen = set()
    for sigma in fan.maximal_cones:
        seen.update(face_cones(sigma))
    return tuple(sorted(seen, key=cone_sort_key))


def all_cones(fan: Fan) -> List[Cone]:
    """Every cone of the fan once, ordered by dimension then generators."""
    return list(_all_cones(fan))


def support_membership(structure: Union[Fan, AffineSystemOfFans], v: Sequence) -> bool:
    cones = structure.maximal_cones if isinstance(structure, Fan) else structure.charts
    return any(contains(sigma, v) for sigma in cones)


def _closure(cones: Iterable[Cone]) -> FrozenSet[Cone]:
    out = set()
    for sigma in cones:
        out.update(face_cones(sigma))
    return frozenset(out)


def validate_system(
    ambient_rank: int,
    charts: Sequence[Cone],
    intersections: Mapping[Tuple[int, int], Sequence[Cone]],
) -> AffineSystemOfFans:
    """
    Validate an affine system of fans.

    Missing pairs are glued along {0}. Glueing data are closed under faces.
    """
    for sigma in charts:
        _check_cone(ambient_rank, sigma)
    count = len(charts)

    data: Dict[Tuple[int, int], FrozenSet[Cone]] = {}
    for (i, j), cones in intersections.items():
        if not (0 <= i < count and 0 <= j < count):
            raise DimensionMismatch(f"glueing data ({i},{j}) refer to a missing chart")
        if i == j:
            raise NonAffineSystem(f"glueing data ({i},{i}) on the diagonal; charts are single cones")
        for sigma in cones:
            _check_cone(ambient_rank, sigma)
        closure = _closure(cones) if cones else frozenset({zero_cone(ambient_rank)})
        key = (min(i, j), max(i, j))
        if key in data and data[key] != closure:
            raise SymmetryViolation(i, j)
        data[key] = closure

    for i, j in itertools.combinations(range(count), 2):
        closure = data.setdefault((i, j), frozenset({zero_cone(ambient_rank)}))
        for sigma in sorted(closure, key=cone_sort_key):
            if not (is_face(sigma, charts[i]) and is_face(sigma, charts[j])):
                raise NotCommonFace(i, j, sigma)

    def glued(a: int, b: int) -> FrozenSet[Cone]:
        if a == b:
            return frozenset(face_cones(charts[a]))
        return data[(min(a, b), max(a, b))]

    for i, j, k in itertools.permutations(range(count), 3):
        for sigma in sorted(glued(i, j) & glued(j, k), key=cone_sort_key):
            if sigma not in glued(i, k):
                raise TripleConditionViolation(i, j, k, sigma)

    stored = tuple(
        (key, tuple(sorted(_maximal(list(cones)), key=cone_sort_key)))
        for key, cones in sorted(data.items())
    )
    return AffineSystemOfFans(ambient_rank=ambient_rank, charts=tuple(charts), intersections=stored)


@lru_cache(maxsize=4096)
def _glueing_cones(system: AffineSystemOfFans, i: int, j: int) -> Tuple[Cone, ...]:
    cones = system.glueing_maximal(i, j) or (zero_cone(system.ambient_rank),)
    return tuple(sorted(_closure(cones), key=cone_sort_key))


def glueing_cones(system: AffineSystemOfFans, i: int, j: int) -> List[Cone]:
    """All cones of Delta_ij."""
    return list(_glueing_cones(system, i, j))


def fan_as_system(fan: Fan) -> AffineSystemOfFans:
    """The separated system: Delta_ij are the faces of sigma(i) meet sigma(j)."""
    charts = list(fan.maximal_cones)
    intersections = {
        (i, j): [intersect(charts[i], charts[j])]
        for i, j in itertools.combinations(range(len(charts)), 2)
    }
    return validate_system(fan.ambient_rank, charts, intersections)


def as_system(structure: Union[Fan, AffineSystemOfFans]) -> AffineSystemOfFans:
    return fan_as_system(structure) if isinstance(structure, Fan) else structure


def labelled_cones(system: AffineSystemOfFans) -> List[LabelledCone]:
    """All (cone, chart) pairs, by chart and then canonical face order."""
    return [
        LabelledCone(cone=sigma, chart=i)
        for i, chart in enumerate(system.charts)
        for sigma in face_cones(chart)
    ]


def target_fan(target: Union[Fan, AffineSystemOfFans]) -> Fan:
    """
    The fan behind a fan map target.

    A system is accepted when it is the separated system of a fan: its charts
    form a fan and each pair is glued along the whole common face.
    """
    if isinstance(target, Fan):
        return target
    fan = validate_fan(list(target.charts), target.ambient_rank)
    separated = fan_as_system(fan)
    if fan.maximal_cones != target.charts or any(
        glueing_cones(target, i, j) != glueing_cones(separated, i, j)
        for i, j in itertools.combinations(range(len(target.charts)), 2)
    ):
        raise NonAffineSystem("a target system of a fan map must be the separated system of a fan")
    return fan


def validate_fan_map(
    P: IntMat, source: Union[Fan, AffineSystemOfFans], target: Union[Fan, AffineSystemOfFans]
) -> FanMap:
    """
    Assign each source chart to the first maximal target cone containing its image.

    A target system is replaced by its fan (see target_fan); glueing that is
    not separated has no orbit structure a fan map could land in.
    """
    system = as_system(source)
    target = target_fan(target)
    if P.cols != system.ambient_rank or P.n_rows != target.ambient_rank:
        raise DimensionMismatch(
            f"a {P.shape} matrix cannot map Z^{system.ambient_rank} to Z^{target.ambient_rank}"
        )
    assignment = []
    for i, chart in enumerate(system.charts):
        image = image_cone(P, chart)
        index = next(
            (k for k, tau in enumerate(target.maximal_cones) if contains_cone(tau, image)), None
        )
        if index is None:
            raise NoTargetCone(chart, i)
        assignment.append(index)
    return FanMap(matrix=P, source=system, target=target, assignment=tuple(assignment))


def minimal_target_cone(fan_map: FanMap, labelled: LabelledCone) -> Cone:
    """The smallest target cone containing the image of a labelled source cone."""
    image = image_cone(fan_map.matrix, labelled.cone)
    tau = fan_map.target.maximal_cones[fan_map.assignment[labelled.chart]]
    return materialize(minimal_face_containing(tau, image))


def transform_fan(G: IntMat, fan: Fan) -> Fan:
    return validate_fan([transform_cone(G, sigma) for sigma in fan.maximal_cones], G.n_rows)


def transform_system(G: IntMat, system: AffineSystemOfFans) -> AffineSystemOfFans:
    return validate_system(
        G.n_rows,
        [transform_cone(G, sigma) for sigma in system.charts],
        {pair: [transform_cone(G, sigma) for sigma in cones] for pair, cones in system.intersections},
    )


def isomorphic_up_to_relabel(first: AffineSystemOfFans, second: AffineSystemOfFans) -> bool:
    """Equal after some permutation of chart indices."""
    if first.ambient_rank != second.ambient_rank or len(first.charts) != len(second.charts):
        return False
    count = len(first.charts)
    for perm in itertools.permutations(range(count)):
        if any(first.charts[i] != second.charts[perm[i]] for i in range(count)):
            continue
        if all(
            set(glueing_cones(first, i, j)) == set(glueing_cones(second, perm[i], perm[j]))
            for i, j in itertools.combinations(range(count), 2)
        ):
            return True
    return False
