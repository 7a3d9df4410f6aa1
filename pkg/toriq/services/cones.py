"""
Cone service: generator <-> inequality conversion, faces, relative interiors,
duals, images and intersections.

Conversion uses the double description method with exact integer
arithmetic; adjacency of rays is decided combinatorially from their sets
of tight inequalities.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from toriq.core.exceptions import DimensionMismatch, NotStrictlyConvex, ValidationFailure
from toriq.models.cone import Cone, FaceId
from toriq.models.lattice import IntMat, IntVec, as_intvec
from toriq.services.exactlin import pairing, primitive, project_off, saturation_basis

logger = logging.getLogger(__name__)


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _neg(v: Sequence[int]) -> IntVec:
    return tuple(-x for x in v)


def _prim(v: Sequence[int]) -> IntVec:
    g = gcd(*v)
    return tuple(x // g for x in v)


def double_description(
    ambient_rank: int, inequalities: Iterable[Sequence[int]]
) -> Tuple[List[IntVec], List[IntVec]]:
    """
    Generators of {x : <a, x> >= 0 for every a in inequalities}.

    Returns (lineality, rays): a basis of the lineality space and the
    extreme rays modulo it, all primitive.
    """
    lineality: List[IntVec] = [
        tuple(int(i == j) for j in range(ambient_rank)) for i in range(ambient_rank)
    ]
    rays: List[IntVec] = []
    processed: List[IntVec] = []

    for a in inequalities:
        a = as_intvec(a)
        if not any(a):
            continue
        values = [_dot(a, line) for line in lineality]
        pivot = next((k for k, value in enumerate(values) if value != 0), None)

        if pivot is not None:
            # a cuts the lineality space: trade one line for a ray
            l0, c0 = lineality[pivot], values[pivot]
            if c0 < 0:
                l0, c0 = _neg(l0), -c0

            def shift(v: IntVec) -> IntVec:
                return _prim([c0 * x - _dot(a, v) * y for x, y in zip(v, l0)])

            lineality = [shift(line) for k, line in enumerate(lineality) if k != pivot]
            rays = _dedupe([shift(r) for r in rays] + [l0])
        else:
            positive = [r for r in rays if _dot(a, r) > 0]
            negative = [r for r in rays if _dot(a, r) < 0]
            kept = [r for r in rays if _dot(a, r) >= 0]
            if positive and negative:
                tight: Dict[IntVec, FrozenSet[int]] = {
                    r: frozenset(i for i, b in enumerate(processed) if _dot(b, r) == 0)
                    for r in rays
                }
                for p in positive:
                    for q in negative:
                        common = tight[p] & tight[q]
                        if any(common <= tight[r] for r in rays if r != p and r != q):
                            continue
                        ap, aq = _dot(a, p), _dot(a, q)
                        kept.append(_prim([ap * y - aq * x for x, y in zip(p, q)]))
            rays = _dedupe(kept)
        processed.append(a)
        logger.debug("double description step %d: %d lines, %d rays", len(processed), len(lineality), len(rays))

    return lineality, rays


def _dedupe(vectors: Iterable[IntVec]) -> List[IntVec]:
    seen = set()
    out = []
    for v in vectors:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _canonical(
    n: int,
    rays: Sequence[IntVec],
    lineality: Sequence[IntVec],
    facets: Sequence[IntVec],
    equations: Sequence[IntVec],
) -> Cone:
    lineality_basis = saturation_basis(n, lineality) if lineality else ()
    equation_basis = saturation_basis(n, equations) if equations else ()
    generators = sorted({primitive(project_off(r, lineality_basis)) for r in rays})
    normals = sorted({primitive(project_off(u, equation_basis)) for u in facets})
    return Cone(
        ambient_rank=n,
        generators=tuple(generators),
        lineality_basis=lineality_basis,
        facet_normals=tuple(normals),
        equations=equation_basis,
    )


@lru_cache(maxsize=16384)
def _cone_from_vrep(n: int, generators: Tuple[IntVec, ...], lineality: Tuple[IntVec, ...]) -> Cone:
    gens = [g for g in generators if any(g)]
    lines = [line for line in lineality if any(line)]
    constraints = gens + lines + [_neg(line) for line in lines]
    # the dual cone: its lines are the equations, its rays the facet normals
    equations, facets = double_description(n, constraints)
    lineality_out, rays_out = double_description(
        n, list(facets) + list(equations) + [_neg(e) for e in equations]
    )
    return _canonical(n, rays_out, lineality_out, facets, equations)


def _check_vectors(n: int, vectors: Iterable[Sequence[int]]) -> Tuple[IntVec, ...]:
    out = []
    for v in vectors:
        if len(v) != n:
            raise DimensionMismatch(f"vector {tuple(v)} does not live in Z^{n}")
        out.append(as_intvec(v))
    return tuple(out)


def cone_from_generators(
    ambient_rank: int,
    gens: Iterable[Sequence[int]],
    lineality: Iterable[Sequence[int]] = (),
) -> Cone:
    """Cone generated by gens (plus the span of lineality). No gens gives {0}."""
    return _cone_from_vrep(
        ambient_rank, _check_vectors(ambient_rank, gens), _check_vectors(ambient_rank, lineality)
    )


def cone_from_inequalities(
    ambient_rank: int,
    inequalities: Iterable[Sequence[int]],
    equations: Iterable[Sequence[int]] = (),
) -> Cone:
    """Cone {x : <a, x> >= 0, <e, x> = 0}."""
    inequalities = _check_vectors(ambient_rank, inequalities)
    equations = _check_vectors(ambient_rank, equations)
    lineality, rays = double_description(
        ambient_rank, inequalities + equations + tuple(_neg(e) for e in equations)
    )
    return cone_from_generators(ambient_rank, rays, lineality)


def zero_cone(ambient_rank: int) -> Cone:
    return cone_from_generators(ambient_rank, [])


def dual(sigma: Cone) -> Cone:
    """The dual cone; an exact swap of the two canonical descriptions."""
    return Cone(
        ambient_rank=sigma.ambient_rank,
        generators=sigma.facet_normals,
        lineality_basis=sigma.equations,
        facet_normals=sigma.generators,
        equations=sigma.lineality_basis,
    )


def _check_point(sigma: Cone, v: Sequence) -> None:
    if len(v) != sigma.ambient_rank:
        raise DimensionMismatch(f"point of length {len(v)} tested against a cone in rank {sigma.ambient_rank}")


def contains(sigma: Cone, v: Sequence) -> bool:
    _check_point(sigma, v)
    return all(pairing(e, v) == 0 for e in sigma.equations) and all(
        pairing(u, v) >= 0 for u in sigma.facet_normals
    )


def relint_contains(sigma: Cone, v: Sequence) -> bool:
    """v lies in the relative interior of sigma."""
    _check_point(sigma, v)
    return all(pairing(e, v) == 0 for e in sigma.equations) and all(
        pairing(u, v) > 0 for u in sigma.facet_normals
    )


def contains_cone(sigma: Cone, tau: Cone) -> bool:
    if sigma.ambient_rank != tau.ambient_rank:
        raise DimensionMismatch("cones live in lattices of different rank")
    return all(contains(sigma, g) for g in tau.generators) and all(
        contains(sigma, line) and contains(sigma, _neg(line)) for line in tau.lineality_basis
    )


def relint_sample(sigma: Cone) -> IntVec:
    """Sum of the generators; a lattice point of the relative interior."""
    total = [0] * sigma.ambient_rank
    for g in sigma.generators:
        total = [x + y for x, y in zip(total, g)]
    return tuple(total)


def tight_facets(sigma: Cone, v: Sequence) -> FrozenSet[int]:
    return frozenset(k for k, u in enumerate(sigma.facet_normals) if pairing(u, v) == 0)


def cone_sort_key(sigma: Cone) -> tuple:
    return (sigma.dim, sigma.generators, sigma.lineality_basis)


@lru_cache(maxsize=4096)
def _face_lattice(sigma: Cone) -> Tuple[FaceId, ...]:
    gens, normals = sigma.generators, sigma.facet_normals
    zero = [[_dot(u, g) == 0 for g in gens] for u in normals]

    def closure(rays: FrozenSet[int]) -> FrozenSet[int]:
        return frozenset(k for k in range(len(normals)) if all(zero[k][r] for r in rays))

    top = frozenset(range(len(gens)))
    found: Dict[FrozenSet[int], FrozenSet[int]] = {closure(top): top}
    queue = [closure(top)]
    while queue:
        tight = queue.pop()
        rays = found[tight]
        for k in range(len(normals)):
            if k in tight:
                continue
            sub = frozenset(r for r in rays if zero[k][r])
            sub_tight = closure(sub)
            if sub_tight not in found:
                found[sub_tight] = sub
                queue.append(sub_tight)

    def key(item):
        tight, rays = item
        return (len(rays), tuple(gens[r] for r in sorted(rays)))

    ordered = sorted(found.items(), key=key)
    return tuple(FaceId(parent=sigma, tight=tight) for tight, _ in ordered)


def faces(sigma: Cone) -> List[FaceId]:
    """
    Every face of a strictly convex cone exactly once, {0} and sigma included.

    Canonical order: by dimension, then lexicographically by generators.
    """
    if not sigma.is_strictly_convex:
        raise NotStrictlyConvex(sigma, "face enumeration needs a strictly convex cone")
    return list(_face_lattice(sigma))


@lru_cache(maxsize=16384)
def materialize(face: FaceId) -> Cone:
    return cone_from_generators(
        face.parent.ambient_rank, face.generators, face.parent.lineality_basis
    )


def face_cones(sigma: Cone) -> List[Cone]:
    return [materialize(face) for face in faces(sigma)]


def minimal_face_containing(sigma: Cone, S: Cone) -> FaceId:
    """The smallest face of sigma containing S: the one whose relative interior meets S's."""
    if not contains_cone(sigma, S):
        raise ValidationFailure("cone is not contained in the parent cone", cone=S, parent=sigma)
    return FaceId(parent=sigma, tight=tight_facets(sigma, relint_sample(S)))


def is_face(tau: Cone, sigma: Cone) -> bool:
    if tau.ambient_rank != sigma.ambient_rank or not contains_cone(sigma, tau):
        return False
    return materialize(minimal_face_containing(sigma, tau)) == tau


@lru_cache(maxsize=16384)
def intersect(sigma: Cone, other: Cone) -> Cone:
    """sigma meet other, from the union of both inequality systems."""
    if sigma.ambient_rank != other.ambient_rank:
        raise DimensionMismatch("cannot intersect cones in lattices of different rank")
    return cone_from_inequalities(
        sigma.ambient_rank,
        sigma.facet_normals + other.facet_normals,
        sigma.equations + other.equations,
    )


def relints_intersect(sigma: Cone, other: Cone) -> bool:
    """
    Whether the relative interiors meet.

    They do iff the relative interior sample of the intersection is
    interior to both cones.
    """
    sample = relint_sample(intersect(sigma, other))
    return not tight_facets(sigma, sample) and not tight_facets(other, sample)


@lru_cache(maxsize=16384)
def image_cone(P: IntMat, sigma: Cone) -> Cone:
    """Cone generated by the images of sigma's generators (lines map to lines)."""
    if P.cols != sigma.ambient_rank:
        raise DimensionMismatch(f"a {P.shape} matrix cannot act on Z^{sigma.ambient_rank}")
    return cone_from_generators(
        P.n_rows,
        [as_intvec(P.apply(g)) for g in sigma.generators],
        [as_intvec(P.apply(line)) for line in sigma.lineality_basis],
    )


def transform_cone(G: IntMat, sigma: Cone) -> Cone:
    """Apply a change of lattice coordinates."""
    return image_cone(G, sigma)


def negate(sigma: Cone) -> Cone:
    return cone_from_generators(
        sigma.ambient_rank, [_neg(g) for g in sigma.generators], sigma.lineality_basis
    )


def hull(ambient_rank: int, cones: Iterable[Cone]) -> Cone:
    """Smallest cone containing all the given cones."""
    gens: List[IntVec] = []
    lines: List[IntVec] = []
    for sigma in cones:
        gens.extend(sigma.generators)
        lines.extend(sigma.lineality_basis)
    return cone_from_generators(ambient_rank, gens, lines)


def preimage_of_ray(lift: Sequence[int], kernel: Sequence[IntVec]) -> Cone:
    """P^-1(ray(P lift)) for a projection P with the given kernel basis."""
    return cone_from_generators(len(lift), [lift], kernel)
