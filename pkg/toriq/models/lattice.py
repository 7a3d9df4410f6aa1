"""
Lattice value types: integer vectors, integer matrices and sublattices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

IntVec = Tuple[int, ...]
RatVec = Tuple[Union[int, Fraction], ...]


def as_intvec(values: Iterable[int]) -> IntVec:
    """Coerce an iterable of integral values (numpy ints included) to an IntVec."""
    out = []
    for value in values:
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise ValueError(f"non-integral entry {value}")
            value = value.numerator
        out.append(int(value))
    return tuple(out)


@dataclass(frozen=True)
class IntMat:
    """
    Row-major integer matrix.

    Zero rows are allowed (a projection onto the zero lattice is 0 x n),
    which is why the column count is stored explicitly.
    """

    rows: Tuple[IntVec, ...]
    cols: int

    def __post_init__(self):
        for row in self.rows:
            if len(row) != self.cols:
                raise ValueError(f"row {row} does not have {self.cols} entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMat":
        rows = tuple(as_intvec(row) for row in rows)
        if cols is None:
            if not rows:
                raise ValueError("column count required for a matrix without rows")
            cols = len(rows[0])
        return cls(rows=rows, cols=cols)

    @classmethod
    def from_array(cls, array: np.ndarray) -> "IntMat":
        n_rows, n_cols = array.shape
        return cls(rows=tuple(as_intvec(array[i]) for i in range(n_rows)), cols=n_cols)

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls(rows=tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), cols=n)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.cols

    def array(self) -> np.ndarray:
        """Exact numpy view (dtype=object keeps Python's big integers)."""
        out = np.zeros((self.n_rows, self.cols), dtype=object)
        for i, row in enumerate(self.rows):
            for j, value in enumerate(row):
                out[i, j] = value
        return out

    def transpose(self) -> "IntMat":
        return IntMat(
            rows=tuple(tuple(row[j] for row in self.rows) for j in range(self.cols)),
            cols=self.n_rows,
        )

    def apply(self, v: Sequence[Union[int, Fraction]]) -> RatVec:
        """Matrix-vector product; keeps Fractions when the input has them."""
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for a matrix with {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(row, v)), 0) for row in self.rows)

    def compose(self, other: "IntMat") -> "IntMat":
        """Matrix product self @ other."""
        if self.cols != other.n_rows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        if self.n_rows == 0:
            return IntMat(rows=(), cols=other.cols)
        if self.cols == 0 or other.cols == 0:
            return IntMat(rows=tuple((0,) * other.cols for _ in self.rows), cols=other.cols)
        return IntMat.from_array(self.array().dot(other.array()))

    def to_list(self) -> list:
        return [list(row) for row in self.rows]


@dataclass(frozen=True)
class Sublattice:
    """
    A sublattice of Z^ambient_rank with its basis in Hermite normal form.

    Two Sublattice values describe the same lattice iff they compare equal.
    """

    ambient_rank: int
    basis: Tuple[IntVec, ...] = field(default=())
    saturated: bool = True

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> IntMat:
        return IntMat(rows=self.basis, cols=self.ambient_rank)

    def to_list(self) -> list:
        return [list(v) for v in self.basis]
