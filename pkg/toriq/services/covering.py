"""
Cone covering decisions: is a cone contained in a union of cones?

The target cone is cut into the full-dimensional cells of the arrangement
formed by the facet hyperplanes of the (full-dimensional) pieces. Each
cell lies inside or outside every piece, so one interior sample per cell
decides coverage. Lower-dimensional pieces never cover a full-dimensional
cell, and the union of closed pieces covering all full-dimensional cells
covers the whole cone.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, TypeVar

from toriq.core.config import settings
from toriq.core.exceptions import CoverPrecondition, DimensionMismatch, Unsupported
from toriq.models.cone import Cone, FaceId
from toriq.models.fan import FanMap
from toriq.models.lattice import IntVec
from toriq.models.quotient import CoverWitness
from toriq.services.cones import (
    cone_from_inequalities,
    contains,
    contains_cone,
    image_cone,
    intersect,
    materialize,
    relint_sample,
    tight_facets,
)
from toriq.services.exactlin import pairing, primitive, project_off, quotient_projection, saturate, span

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """map() over a thread pool of TORIQ_WORKERS threads, keeping input order."""
    items = list(items)
    if settings.TORIQ_WORKERS <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=settings.TORIQ_WORKERS) as pool:
        return list(pool.map(func, items))


def _restricted_hyperplanes(tau: Cone, pieces: Sequence[Cone]) -> List[IntVec]:
    """Facet forms of the pieces as hyperplanes of span(tau), without repeats."""
    seen = set()
    out = []
    for piece in pieces:
        for u in piece.facet_normals:
            restricted = project_off(u, tau.equations)
            if not any(restricted):
                continue
            h = primitive(restricted)
            key = max(h, tuple(-x for x in h))
            if key not in seen:
                seen.add(key)
                out.append(h)
    return out


def _side(cell: Cone, h: IntVec) -> int:
    if any(pairing(h, line) != 0 for line in cell.lineality_basis):
        return 0
    values = [pairing(h, g) for g in cell.generators]
    if all(value >= 0 for value in values):
        return 1
    if all(value <= 0 for value in values):
        return -1
    return 0


def _split(cells: List[Cone], h: IntVec) -> List[Cone]:
    out = []
    for cell in cells:
        if _side(cell, h):
            out.append(cell)
            continue
        for form in (h, tuple(-x for x in h)):
            part = cone_from_inequalities(
                cell.ambient_rank, cell.facet_normals + (form,), cell.equations
            )
            if part.dim == cell.dim:
                out.append(part)
    return out


def _gap_point(cell: Cone, pieces: Sequence[Cone]) -> IntVec:
    """Interior point of the cell outside every piece: sum of t^k g_k for t = 1, 2, ..."""
    gens = list(cell.generators) + [
        v for line in cell.lineality_basis for v in (line, tuple(-x for x in line))
    ]
    t = 1
    while True:
        point = [0] * cell.ambient_rank
        for k, g in enumerate(gens):
            point = [x + t**k * y for x, y in zip(point, g)]
        point = tuple(point)
        if not any(contains(piece, point) for piece in pieces):
            return point
        t += 1


def cone_covered_by(tau: Cone, cover: Sequence[Cone]) -> CoverWitness:
    """Decide tau inside the union of cover, with a gap point when it is not."""
    for sigma in cover:
        if sigma.ambient_rank != tau.ambient_rank:
            raise DimensionMismatch("cover cones live in a lattice of different rank")
    pieces = [intersect(sigma, tau) for sigma in cover]
    if any(piece == tau for piece in pieces):
        return CoverWitness(covered=True, cell_count=1, target=tau)

    full = [piece for piece in pieces if piece.dim == tau.dim]
    cells = [tau]
    for h in _restricted_hyperplanes(tau, full):
        cells = _split(cells, h)
        if len(cells) > settings.TORIQ_MAX_CELLS:
            raise Unsupported(
                f"cover decision exceeds {settings.TORIQ_MAX_CELLS} cells", cone=tau
            )
    logger.debug("cover check of %s: %d pieces, %d cells", tau, len(pieces), len(cells))

    for cell in cells:
        sample = relint_sample(cell)
        if any(contains(piece, sample) for piece in full):
            continue
        gap = _gap_point(cell, pieces)
        return CoverWitness(covered=False, gap_point=gap, cell_count=len(cells), target=tau)
    return CoverWitness(covered=True, cell_count=len(cells), target=tau)


def lemma_conecover_check(sigma: Cone, tau: FaceId, pieces: Sequence[Cone]) -> bool:
    """
    Check that P(sigma) is the union of the P(sigma_i) with sigma_i meeting
    the relative interior of tau, where P divides out lin(tau).

    Always true for a genuine cover; kept as a falsification harness.
    """
    witness = cone_covered_by(sigma, pieces)
    if not witness.covered:
        raise CoverPrecondition("pieces do not cover the cone", gap_point=witness.gap_point)
    n = sigma.ambient_rank
    face = materialize(tau)
    P = quotient_projection(n, saturate(span(n, face.generators)))
    touching = [
        piece for piece in pieces if not tight_facets(face, relint_sample(intersect(piece, face)))
    ]
    left = image_cone(P, sigma)
    images = [image_cone(P, piece) for piece in touching]
    return all(contains_cone(left, image) for image in images) and cone_covered_by(left, images).covered


def is_weakly_proper(fan_map: FanMap) -> CoverWitness:
    """
    Support equality P(|S|) = |Delta|.

    The inclusion into |Delta| holds for any fan map, so each maximal target
    cone is tested for coverage by the projected charts.
    """
    images = [image_cone(fan_map.matrix, chart) for chart in fan_map.source.charts]
    results = ordered_map(lambda tau: cone_covered_by(tau, images), fan_map.target.maximal_cones)
    for witness in results:
        if not witness.covered:
            logger.info("map is not weakly proper: gap point %s", witness.gap_point)
            return witness
    return CoverWitness(covered=True, cell_count=sum(w.cell_count for w in results))
