"""
Rational polyhedral cones in canonical double description.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Tuple

from toriq.models.lattice import IntVec


@dataclass(frozen=True)
class Cone:
    """
    A cone in Q^ambient_rank, stored as both of its descriptions.

    As a set it is cone(generators) + span(lineality_basis), and also
    {v : <u, v> >= 0 for u in facet_normals, <e, v> = 0 for e in equations}.

    Canonical form: generators are primitive, orthogonal to the lineality
    space and sorted; facet normals are primitive, orthogonal to the
    equations and sorted; lineality_basis and equations are Hermite bases
    of saturated lattices. Equal cones therefore compare equal.
    """

    ambient_rank: int
    generators: Tuple[IntVec, ...]
    lineality_basis: Tuple[IntVec, ...]
    facet_normals: Tuple[IntVec, ...]
    equations: Tuple[IntVec, ...]

    @property
    def dim(self) -> int:
        return self.ambient_rank - len(self.equations)

    @property
    def is_strictly_convex(self) -> bool:
        return not self.lineality_basis

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    def to_dict(self) -> dict:
        out = {"rays": [list(g) for g in self.generators]}
        if self.lineality_basis:
            out["lineality"] = [list(v) for v in self.lineality_basis]
        return out

    def __str__(self) -> str:
        if self.is_zero:
            return "{0}"
        parts = ", ".join("(" + ",".join(str(x) for x in g) + ")" for g in self.generators)
        text = f"cone({parts})"
        if self.lineality_basis:
            lines = ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in self.lineality_basis)
            text += f" + span({lines})"
        return text


@dataclass(frozen=True)
class FaceId:
    """
    A face of a cone, named by every facet normal of the parent vanishing on it.

    The empty set names the parent itself.
    """

    parent: Cone
    tight: FrozenSet[int]

    @property
    def generators(self) -> Tuple[IntVec, ...]:
        normals = [self.parent.facet_normals[k] for k in self.tight]
        return tuple(
            g
            for g in self.parent.generators
            if all(sum(a * b for a, b in zip(u, g)) == 0 for u in normals)
        )

    @property
    def is_parent(self) -> bool:
        return not self.tight
