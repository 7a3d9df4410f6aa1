"""
Exact integer and rational linear algebra over lattices.

Hermite normal forms are built from 2x2 extended-gcd row operations on
numpy object arrays, so every intermediate stays a Python integer.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from toriq.core.exceptions import DimensionMismatch, NotSaturated
from toriq.models.lattice import IntMat, IntVec, RatVec, Sublattice, as_intvec

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


def pairing(u: Sequence[Number], v: Sequence[Number]) -> Number:
    """Dual pairing <u, v> of a linear form with a lattice vector."""
    if len(u) != len(v):
        raise DimensionMismatch(f"cannot pair vectors of length {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), 0)


def primitive(v: Sequence[Number]) -> IntVec:
    """Scale a nonzero rational vector to the primitive lattice vector on its ray."""
    denominators = [Fraction(x).denominator for x in v]
    scale = lcm(*denominators) if denominators else 1
    scaled = [int(Fraction(x) * scale) for x in v]
    g = gcd(*scaled) if scaled else 0
    if g == 0:
        raise ValueError("the zero vector has no primitive form")
    return tuple(x // g for x in scaled)


def exgcd(a: int, b: int) -> np.ndarray:
    """
    2x2 unimodular matrix E with E @ [a, b] = [gcd(a, b), 0].

    The determinant is 1, except for a = b = 0 where E is the swap matrix
    of determinant -1.

    If a divides b, E[0, 1] is 0.
    """
    a_sign = -1 if a < 0 else 1
    a *= a_sign
    b_sign = -1 if b < 0 else 1
    b *= b_sign

    # Euclid on the column [a, b], tracking row operations in the augmented part.
    E = np.array([[a, 1, 0], [b, 0, 1]], dtype=object)
    E = E[::-1]
    while E[1, 0] != 0:
        q = E[0, 0] // E[1, 0]
        E[0] -= q * E[1]
        E = E[::-1]

    g = E[0, 0]
    E = E[:, 1:].copy()
    E *= np.array([a_sign, b_sign], dtype=object)
    if g != 0:
        E[1] = np.array([-b_sign * b // g, a_sign * a // g], dtype=object)
    return E


def hnf(M: IntMat) -> Tuple[IntMat, IntMat]:
    """
    Row Hermite normal form.

    Returns (H, U) with H = U @ M and U unimodular. Pivots are positive,
    entries above a pivot lie in [0, pivot) and zero rows come last, so H
    depends only on the row lattice of M.
    """
    m, n = M.shape
    A = M.array()
    U = IntMat.identity(m).array()
    r = 0
    for c in range(n):
        if r == m:
            break
        nonzero = [i for i in range(r, m) if A[i, c] != 0]
        if not nonzero:
            continue
        for i in nonzero:
            if i == r:
                continue
            E = exgcd(A[r, c], A[i, c])
            A[[r, i]] = E.dot(A[[r, i]])
            U[[r, i]] = E.dot(U[[r, i]])
        if A[r, c] < 0:
            A[r] = -A[r]
            U[r] = -U[r]
        for k in range(r):
            q = A[k, c] // A[r, c]
            if q:
                A[k] -= q * A[r]
                U[k] -= q * U[r]
        r += 1
    return IntMat.from_array(A), IntMat.from_array(U)


def _nonzero_rows(H: IntMat) -> Tuple[IntVec, ...]:
    return tuple(row for row in H.rows if any(row))


def hermite_basis(ambient_rank: int, vectors: Sequence[Sequence[int]]) -> Tuple[IntVec, ...]:
    """Canonical basis of the lattice spanned by the given vectors."""
    if not vectors:
        return ()
    H, _ = hnf(IntMat.from_rows(vectors, cols=ambient_rank))
    return _nonzero_rows(H)


def rank(M: IntMat) -> int:
    H, _ = hnf(M)
    return len(_nonzero_rows(H))


def abs_det(M: IntMat) -> int:
    """Absolute value of the determinant of a square matrix."""
    if M.n_rows != M.cols:
        raise DimensionMismatch(f"determinant of a non-square {M.shape} matrix")
    H, _ = hnf(M)
    if len(_nonzero_rows(H)) < M.n_rows:
        return 0
    product = 1
    for i in range(M.n_rows):
        product *= H.rows[i][i]
    return abs(product)


def kernel_basis(M: IntMat) -> Sublattice:
    """The saturated sublattice ker(M) of Z^cols."""
    H, U = hnf(M.transpose())
    image_rank = len(_nonzero_rows(H))
    vectors = U.rows[image_rank:]
    return Sublattice(
        ambient_rank=M.cols,
        basis=hermite_basis(M.cols, vectors),
        saturated=True,
    )


def saturation_basis(ambient_rank: int, basis: Sequence[Sequence[int]]) -> Tuple[IntVec, ...]:
    # (L^perp)^perp
    perp = kernel_basis(IntMat(rows=tuple(as_intvec(b) for b in basis), cols=ambient_rank))
    return kernel_basis(perp.matrix()).basis


def span(ambient_rank: int, vectors: Sequence[Sequence[int]]) -> Sublattice:
    """Sublattice generated by the given vectors, with its saturation flag."""
    for v in vectors:
        if len(v) != ambient_rank:
            raise DimensionMismatch(f"vector {tuple(v)} does not live in Z^{ambient_rank}")
    basis = hermite_basis(ambient_rank, [as_intvec(v) for v in vectors])
    return Sublattice(
        ambient_rank=ambient_rank,
        basis=basis,
        saturated=basis == saturation_basis(ambient_rank, basis),
    )


def saturate(L: Sublattice) -> Sublattice:
    """Smallest saturated sublattice containing L."""
    if L.saturated:
        return L
    return Sublattice(
        ambient_rank=L.ambient_rank,
        basis=saturation_basis(L.ambient_rank, L.basis),
        saturated=True,
    )


def join(L: Sublattice, vectors: Sequence[Sequence[int]]) -> Sublattice:
    """saturate(L + span(vectors))."""
    return saturate(span(L.ambient_rank, list(L.basis) + [as_intvec(v) for v in vectors]))


def contains_vector(L: Sublattice, v: Sequence[int]) -> bool:
    return hermite_basis(L.ambient_rank, list(L.basis) + [as_intvec(v)]) == L.basis


def quotient_projection(ambient_rank: int, L: Sublattice) -> IntMat:
    """
    Canonical surjection Z^n -> Z^(n - rank L) with kernel exactly L.

    The rows are the Hermite basis of the annihilator of L.
    """
    if L.ambient_rank != ambient_rank:
        raise DimensionMismatch(f"sublattice of Z^{L.ambient_rank} used in Z^{ambient_rank}")
    if not L.saturated:
        raise NotSaturated("quotient projection needs a saturated sublattice", basis=L.to_list())
    return IntMat(rows=kernel_basis(L.matrix()).basis, cols=ambient_rank)


def right_inverse(P: IntMat) -> IntMat:
    """Integer matrix R with P @ R = identity, for surjective P."""
    m, n = P.shape
    H, U = hnf(P.transpose())
    if H.rows[:m] != IntMat.identity(m).rows:
        raise NotSaturated("matrix is not surjective onto its target lattice", matrix=P.to_list())
    return IntMat(rows=U.rows[:m], cols=n).transpose()


def change_of_coordinates(P: IntMat, Q: IntMat) -> IntMat:
    """
    The unimodular G with Q = G @ P.

    P and Q must be surjective with the same kernel.
    """
    if P.shape != Q.shape:
        raise DimensionMismatch(f"projections of shape {P.shape} and {Q.shape} are not comparable")
    G = Q.compose(right_inverse(P))
    if G.compose(P) != Q or abs_det(G) != 1:
        raise DimensionMismatch("projections have different kernels")
    return G


def solve_rational(
    A: Union[IntMat, Sequence[Sequence[Number]]], b: Sequence[Number]
) -> Optional[Tuple[Fraction, ...]]:
    """
    Exact solution of A x = b by Gauss-Jordan elimination over Q.

    Free variables are set to zero. Returns None for an inconsistent system.
    """
    rows = A.rows if isinstance(A, IntMat) else A
    n_cols = A.cols if isinstance(A, IntMat) else (len(rows[0]) if rows else 0)
    if len(rows) != len(b):
        raise DimensionMismatch(f"{len(rows)} equations with {len(b)} right-hand sides")
    work: List[List[Fraction]] = [
        [Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(rows, b)
    ]
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        lead = work[r][c]
        work[r] = [x / lead for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                factor = work[i][c]
                work[i] = [x - factor * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in work[r:]):
        return None
    x = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        x[c] = work[i][-1]
    return tuple(x)


def project_off(v: Sequence[Number], basis: Sequence[IntVec]) -> RatVec:
    """Orthogonal projection of v onto the complement of span(basis)."""
    if not basis:
        return tuple(Fraction(x) for x in v)
    gram = [[pairing(a, c) for c in basis] for a in basis]
    coeffs = solve_rational(gram, [pairing(a, v) for a in basis])
    out = [Fraction(x) for x in v]
    for coeff, a in zip(coeffs, basis):
        out = [x - coeff * y for x, y in zip(out, a)]
    return tuple(out)
