"""Exact linear algebra over the rationals: echelon forms, Jordan and Fitting data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .matrix import Mat
from .scalar import ONE, ZERO

Vector = tuple


class NotNilpotent(ValueError):
    pass


@dataclass(frozen=True)
class RREF:
    reduced: Mat
    rank: int
    pivots: tuple
    kernel: tuple  # basis vectors of the null space
    image: tuple  # basis of the column space (pivot columns of the input)


def rref(m: Mat) -> RREF:
    """Reduced row-echelon form with rank, kernel basis and column-space basis."""
    nrows, ncols = m.shape
    a = [list(r) for r in m.rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        if p != 1:
            a[r] = [x / p for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    kernel = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][f]
        kernel.append(tuple(v))
    image = tuple(m.col(c) for c in pivots)
    return RREF(Mat._raw(a) if a else m, len(pivots), tuple(pivots), tuple(kernel), image)


def rank(m: Mat) -> int:
    return rref(m).rank


def kernel(m: Mat) -> tuple:
    return rref(m).kernel


def image(m: Mat) -> tuple:
    return rref(m).image


def span_rank(vectors: Sequence[Vector], dim: int) -> int:
    if not vectors:
        return 0
    return rref(Mat.from_columns(list(vectors))).rank if dim else 0


def independent_subset(vectors: Sequence[Vector], start: Sequence[Vector] = ()) -> list:
    """Greedy selection of vectors independent from ``start`` and from each other."""
    chosen = list(start)
    added = []
    current = span_rank(chosen, len(vectors[0]) if vectors else 0) if chosen else 0
    for v in vectors:
        trial = chosen + [v]
        rk = rref(Mat.from_columns(trial)).rank
        if rk > current:
            chosen.append(v)
            added.append(v)
            current = rk
    return added


def coordinates(basis: Sequence[Vector], v: Vector):
    """Coordinates of ``v`` in the independent list ``basis``, or None if outside the span."""
    if not basis:
        return () if not any(v) else None
    n = len(v)
    aug = Mat._raw([[b[i] for b in basis] + [v[i]] for i in range(n)])
    red = rref(aug)
    k = len(basis)
    if k in red.pivots:
        return None
    coords = [ZERO] * k
    for row, pc in enumerate(red.pivots):
        coords[pc] = red.reduced.rows[row][k]
    return tuple(coords)


def in_span(basis: Sequence[Vector], v: Vector) -> bool:
    return coordinates(basis, v) is not None


def rank_sequence(w: Mat) -> list:
    """[rank(w^0), rank(w^1), ..., rank(w^n)]."""
    n = w.n
    out = [n]
    p = Mat.identity(n)
    for _ in range(n):
        p = p @ w
        out.append(rank(p))
    return out


def partition_from_ranks(ranks: Sequence[int]) -> tuple:
    """Jordan partition of a nilpotent matrix from its rank sequence, parts descending.

    The number of parts of size at least m is ranks[m-1] - ranks[m].
    """
    at_least = [ranks[m - 1] - ranks[m] for m in range(1, len(ranks))]
    parts = []
    for m in range(len(at_least), 0, -1):
        exact = at_least[m - 1] - (at_least[m] if m < len(at_least) else 0)
        parts.extend([m] * exact)
    return tuple(parts)


def nilpotent_jordan(w: Mat) -> tuple:
    """Jordan data of a nilpotent matrix.

    Returns ``(partition, P)`` with ``P^-1 w P`` block diagonal with nilpotent
    Jordan blocks in descending size. Each block of size k has columns
    ``w^(k-1) v, ..., w v, v`` for a chain generator ``v``.
    """
    n = w.n
    if not (w ** n).is_zero():
        raise NotNilpotent("matrix is not nilpotent")
    if n == 0:
        return (), Mat.identity(0)
    powers = [Mat.identity(n)]
    for _ in range(n):
        powers.append(powers[-1] @ w)
    kernels = [kernel(p) for p in powers]  # kernels[m] = ker w^m
    height = next(m for m in range(n + 1) if len(kernels[m]) == n)
    generators = []  # (length, vector)
    for m in range(height, 0, -1):
        base = list(kernels[m - 1])
        for length, g in generators:
            base.append(powers[length - m] @ g)
        base = independent_subset(base)
        for v in independent_subset(list(kernels[m]), start=base):
            generators.append((m, v))
    cols = []
    for length, g in generators:
        cols.extend(powers[k] @ g for k in range(length - 1, -1, -1))
    parts = tuple(length for length, _ in generators)
    return parts, Mat.from_columns(cols)


@dataclass(frozen=True)
class FittingSplit:
    one_basis: tuple  # V1: image of m^n, where m acts invertibly
    null_basis: tuple  # V0: kernel of m^n, where m acts nilpotently
    w1: Mat
    w0: Mat

    @property
    def n0(self) -> int:
        return len(self.one_basis)

    @property
    def change_of_basis(self) -> Mat:
        return Mat.from_columns(list(self.one_basis) + list(self.null_basis))

    def projector_null(self) -> Mat:
        """Projection onto V0 along V1."""
        p = self.change_of_basis
        n = p.n
        sel = Mat.diag([0] * self.n0 + [1] * (n - self.n0))
        return p @ sel @ p.inverse()

    def projector_one(self) -> Mat:
        return Mat.identity(self.change_of_basis.n) - self.projector_null()


def fitting_split(m: Mat) -> FittingSplit:
    n = m.n
    mn = m ** n
    red = rref(mn)
    one = red.image
    null = red.kernel
    if not one and not null:
        return FittingSplit((), (), Mat.identity(0), Mat.identity(0))
    p = Mat.from_columns(list(one) + list(null))
    block = p.inverse() @ m @ p
    k = len(one)
    w1 = block.submatrix(range(k), range(k)) if k else Mat._raw([])
    w0 = block.submatrix(range(k, n), range(k, n)) if k < n else Mat._raw([])
    assert all(block[i, j] == 0 for i in range(k) for j in range(k, n))
    assert all(block[i, j] == 0 for i in range(k, n) for j in range(k))
    return FittingSplit(tuple(one), tuple(null), w1, w0)


def is_nilpotent(m: Mat) -> bool:
    return (m ** m.n).is_zero()


def fraction_vector(v) -> Vector:
    return tuple(Fraction(x) for x in v)
