"""
Fans, affine systems of fans and maps between them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from toriq.models.cone import Cone
from toriq.models.lattice import IntMat


@dataclass(frozen=True)
class Fan:
    """A fan, stored by its maximal cones; faces are derived on demand."""

    ambient_rank: int
    maximal_cones: Tuple[Cone, ...]

    def to_dict(self) -> dict:
        return {
            "lattice_rank": self.ambient_rank,
            "maximal_cones": [[list(g) for g in cone.generators] for cone in self.maximal_cones],
        }


@dataclass(frozen=True)
class LabelledCone:
    """A face of chart `chart`; the same cone may occur under several labels."""

    cone: Cone
    chart: int

    def to_dict(self) -> dict:
        return {"chart": self.chart, "rays": [list(g) for g in self.cone.generators]}


@dataclass(frozen=True)
class AffineSystemOfFans:
    """
    Charts sigma(i) plus glueing data Delta_ij for i < j.

    Glueing data are stored by maximal cones. Pairs without an entry are
    glued along the torus only, i.e. Delta_ij = {{0}}.
    """

    ambient_rank: int
    charts: Tuple[Cone, ...]
    intersections: Tuple[Tuple[Tuple[int, int], Tuple[Cone, ...]], ...] = ()

    def glueing_maximal(self, i: int, j: int) -> Tuple[Cone, ...]:
        """Maximal cones of Delta_ij (for i == j, the chart itself)."""
        if i == j:
            return (self.charts[i],)
        key = (min(i, j), max(i, j))
        for pair, cones in self.intersections:
            if pair == key:
                return cones
        return ()

    def to_dict(self) -> dict:
        return {
            "lattice_rank": self.ambient_rank,
            "charts": [[list(g) for g in cone.generators] for cone in self.charts],
            "intersections": [
                {"i": i, "j": j, "cones": [[list(g) for g in cone.generators] for cone in cones]}
                for (i, j), cones in self.intersections
            ],
        }


@dataclass(frozen=True)
class FanMap:
    """
    A lattice map compatible with a source system and a target fan.

    assignment[i] indexes a maximal target cone containing the image of chart i.
    """

    matrix: IntMat
    source: AffineSystemOfFans
    target: Fan
    assignment: Tuple[int, ...]
