"""
SVG cross-sections of three-dimensional fans.

A cone is cut by the affine plane <h, x> = level. Plane points are given
the coordinates (<b1, x>, <b2, x>) for a lattice basis b1, b2 of h^perp,
which for h = e1 are simply (y, z).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from reportlab.graphics import renderSVG
from reportlab.graphics.shapes import Circle, Drawing, PolyLine, Polygon, String
from reportlab.lib import colors

from toriq.core.config import settings
from toriq.core.exceptions import DimensionMismatch, ValidationFailure
from toriq.models.cone import Cone
from toriq.models.lattice import IntMat
from toriq.services.exactlin import kernel_basis, pairing

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]

FILLS = [
    colors.HexColor("#e5f1fd"),
    colors.HexColor("#eaf7f0"),
    colors.HexColor("#fff4e5"),
    colors.HexColor("#f3e8ff"),
]
STROKE = colors.HexColor("#0b2e59")
INK = colors.HexColor("#0b1220")
MARGIN = 24


@dataclass(frozen=True)
class SliceRegion:
    label: str
    points: Tuple[Point, ...]


def parse_level(text: str) -> Fraction:
    """Accept integers, decimals and p/q."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationFailure(f"level {text!r} is not a rational number") from exc


def _ordered(points: List[Point]) -> List[Point]:
    # angular order around the centroid; floats are used for sorting only
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(float(p[1] - cy), float(p[0] - cx)))


def slice_regions(
    cones: Sequence[Cone], hyperplane: Sequence[int], level: Fraction
) -> List[SliceRegion]:
    """Exact cross-section polygons (or segments, or points) of the given cones."""
    hyperplane = tuple(int(x) for x in hyperplane)
    if len(hyperplane) != 3 or not any(hyperplane):
        raise DimensionMismatch("slice plots need a nonzero hyperplane in Z^3")
    b1, b2 = kernel_basis(IntMat.from_rows([hyperplane])).basis
    regions = []
    for k, cone in enumerate(cones):
        if cone.ambient_rank != 3:
            raise DimensionMismatch(f"slice plots need cones in Z^3, got Z^{cone.ambient_rank}")
        heights = [pairing(hyperplane, g) for g in cone.generators]
        if not cone.generators:
            continue
        positive = all(value > 0 for value in heights)
        if cone.lineality_basis or not (positive or all(value < 0 for value in heights)):
            logger.warning("cone %s meets the slice plane in an unbounded set; skipped", cone)
            continue
        # the plane misses the cone unless level has the sign of the heights
        if level == 0 or (level > 0) != positive:
            continue
        vertices = {
            (Fraction(pairing(b1, g)) * level / h, Fraction(pairing(b2, g)) * level / h)
            for g, h in zip(cone.generators, heights)
        }
        regions.append(SliceRegion(label=str(k), points=tuple(_ordered(sorted(vertices)))))
    return regions


def _scaler(regions: Sequence[SliceRegion], size: int):
    xs = [float(p[0]) for region in regions for p in region.points] or [0.0]
    ys = [float(p[1]) for region in regions for p in region.points] or [0.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    scale = (size - 2 * MARGIN) / span
    x0, y0 = min(xs), min(ys)
    return lambda p: (MARGIN + (float(p[0]) - x0) * scale, MARGIN + (float(p[1]) - y0) * scale)


def draw_slice(regions: Sequence[SliceRegion], size: Optional[int] = None) -> Drawing:
    size = size or settings.TORIQ_SVG_SIZE
    drawing = Drawing(size, size)
    to_canvas = _scaler(regions, size)
    for k, region in enumerate(regions):
        coords = [to_canvas(p) for p in region.points]
        flat = [value for xy in coords for value in xy]
        if len(coords) >= 3:
            drawing.add(
                Polygon(flat, fillColor=FILLS[k % len(FILLS)], strokeColor=STROKE, strokeWidth=1.5)
            )
        elif len(coords) == 2:
            drawing.add(PolyLine(flat, strokeColor=STROKE, strokeWidth=2))
        else:
            drawing.add(Circle(coords[0][0], coords[0][1], 3, fillColor=STROKE, strokeColor=STROKE))
        cx = sum(x for x, _ in coords) / len(coords)
        cy = sum(y for _, y in coords) / len(coords)
        drawing.add(String(cx, cy, region.label, fontSize=12, fillColor=INK, textAnchor="middle"))
    return drawing


def write_slice_plot(
    cones: Sequence[Cone],
    hyperplane: Sequence[int],
    level: Fraction,
    out: Union[str, Path],
) -> List[SliceRegion]:
    """Draw the section of the cones at <hyperplane, x> = level into an SVG file."""
    regions = slice_regions(cones, hyperplane, level)
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    renderSVG.drawToFile(draw_slice(regions), str(out))
    logger.info("wrote %s with %d regions", out, len(regions))
    return regions
