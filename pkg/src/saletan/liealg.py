"""Lie algebras as structure-constant tensors.

Indices are 0-based internally; ``c[i][j][k]`` is the coefficient of ``e_k`` in
``[e_i, e_j]``. JSON files and user-facing helpers use 1-based indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional, Sequence

from .exactcore import Mat, Q, SingularMatrix, coordinates, fmt, independent_subset, kernel, rank
from .exactcore.scalar import ZERO


class WrongDimension(ValueError):
    pass


class DependentBasis(ValueError):
    pass


class StructureTensor:
    __slots__ = ("n", "c")

    def __init__(self, c: Sequence):
        n = len(c)
        self.c = tuple(tuple(tuple(Q(x) for x in cij) for cij in ci) for ci in c)
        if any(len(ci) != n or any(len(cij) != n for cij in ci) for ci in self.c):
            raise ValueError("structure tensor must be n x n x n")
        self.n = n

    @classmethod
    def zero(cls, n: int) -> "StructureTensor":
        return cls([[[0] * n for _ in range(n)] for _ in range(n)])

    @classmethod
    def from_brackets(cls, n: int, brackets: Mapping) -> "StructureTensor":
        """Build from ``{(i, j): {k: coeff}}`` with 1-based indices and i != j.

        The antisymmetric partner of each listed bracket is filled in.
        """
        c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (i, j), vec in brackets.items():
            if i == j:
                raise ValueError("bracket of a basis element with itself is zero")
            items = vec.items() if isinstance(vec, Mapping) else enumerate(vec, start=1)
            for k, val in items:
                val = Q(val)
                c[i - 1][j - 1][k - 1] += val
                c[j - 1][i - 1][k - 1] -= val
        return cls(c)

    @classmethod
    def from_json(cls, data) -> "StructureTensor":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        n = int(data["dim"])
        if n < 1:
            raise ValueError("dimension must be at least 1")
        c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for entry in data.get("brackets", []):
            i, j, k = int(entry["i"]), int(entry["j"]), int(entry["k"])
            if not (1 <= i < j <= n and 1 <= k <= n):
                raise ValueError(f"bracket entry out of range or not i<j: {entry}")
            val = Q(str(entry["c"]))
            c[i - 1][j - 1][k - 1] += val
            c[j - 1][i - 1][k - 1] -= val
        return cls(c)

    def to_json(self) -> dict:
        entries = []
        for i, j in combinations(range(self.n), 2):
            for k in range(self.n):
                if self.c[i][j][k]:
                    entries.append({"i": i + 1, "j": j + 1, "k": k + 1, "c": fmt(self.c[i][j][k])})
        return {"dim": self.n, "brackets": entries}

    def __eq__(self, other) -> bool:
        if isinstance(other, StructureTensor):
            return self.c == other.c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        parts = []
        for i, j in combinations(range(self.n), 2):
            v = self.c[i][j]
            if any(v):
                terms = " + ".join(f"{fmt(x)}*e{k + 1}" for k, x in enumerate(v) if x)
                parts.append(f"[e{i + 1},e{j + 1}]={terms}")
        return f"StructureTensor(n={self.n}; " + (", ".join(parts) or "abelian") + ")"

    def is_abelian(self) -> bool:
        return not any(x for ci in self.c for cij in ci for x in cij)

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        if len(x) != self.n or len(y) != self.n:
            raise ValueError("dimension mismatch")
        out = [ZERO] * self.n
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj or i == j:
                    continue
                s = xi * yj
                for k, ck in enumerate(self.c[i][j]):
                    if ck:
                        out[k] += s * ck
        return tuple(out)

    def ad(self, x) -> Mat:
        """Matrix of ad_x; column j is [x, e_j]. ``x`` is a vector or a 0-based index."""
        n = self.n
        if isinstance(x, int):
            return Mat._raw([[self.c[x][j][k] for j in range(n)] for k in range(n)])
        cols = [self.bracket(x, _unit(n, j)) for j in range(n)]
        return Mat.from_columns(cols)


def _unit(n: int, i: int) -> tuple:
    return tuple(Fraction(1) if k == i else ZERO for k in range(n))


def basis(n: int) -> list:
    return [_unit(n, i) for i in range(n)]


@dataclass(frozen=True)
class Violation:
    kind: str  # "antisymmetry" or "jacobi"
    indices: tuple  # 1-based
    residual: Fraction

    def to_json(self) -> dict:
        return {"kind": self.kind, "indices": list(self.indices), "residual": fmt(self.residual)}


def validate(c: StructureTensor) -> list:
    """Every violated antisymmetry or Jacobi instance; an empty list means valid.

    Antisymmetry residuals are reported for i <= j (including c^k_ii != 0),
    Jacobi residuals for i < j < k and every output index.
    """
    n = c.n
    out = []
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                r = c.c[i][j][k] + c.c[j][i][k]
                if r:
                    out.append(Violation("antisymmetry", (i + 1, j + 1, k + 1), r))
    cc = c.c
    for i, j, k in combinations(range(n), 3):
        for q in range(n):
            r = ZERO
            for p in range(n):
                r += cc[i][j][p] * cc[p][k][q] + cc[j][k][p] * cc[p][i][q] + cc[k][i][p] * cc[p][j][q]
            if r:
                out.append(Violation("jacobi", (i + 1, j + 1, k + 1, q + 1), r))
    return out


def is_lie(c: StructureTensor) -> bool:
    return not validate(c)


def bracket(c: StructureTensor, x, y) -> tuple:
    return c.bracket(x, y)


def transform(c: StructureTensor, u: Mat) -> StructureTensor:
    """Structure tensor in the basis ``u e_1, ..., u e_n``: (x, y) -> u^-1 [u x, u y]."""
    n = c.n
    if u.shape != (n, n):
        raise ValueError("dimension mismatch")
    try:
        uinv = u.inverse()
    except SingularMatrix:
        raise SingularMatrix("basis change must be invertible") from None
    cols = u.columns()
    out = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = uinv @ c.bracket(cols[i], cols[j])
            out[i][j] = list(v)
            out[j][i] = [-x for x in v]
    return StructureTensor(out)


def derived_algebra(c: StructureTensor) -> tuple:
    vecs = [c.c[i][j] for i, j in combinations(range(c.n), 2) if any(c.c[i][j])]
    if not vecs:
        return ()
    return tuple(independent_subset(vecs))


def center(c: StructureTensor) -> tuple:
    """Joint kernel of ad_{e_j}: x with [x, e_j] = 0 for every j."""
    n = c.n
    # rows: for each j and component k, sum_i x_i c^k_ij = 0
    rows = [[c.c[i][j][k] for i in range(n)] for j in range(n) for k in range(n)]
    return kernel(Mat._raw(rows))


def killing_form(c: StructureTensor) -> Mat:
    ads = [c.ad(i) for i in range(c.n)]
    return Mat._raw([[(a @ b).trace() for b in ads] for a in ads])


def leading_minors(m: Mat) -> list:
    return [m.submatrix(range(k), range(k)).det() for k in range(1, m.n + 1)]


def is_negative_definite(m: Mat) -> bool:
    return all((d < 0) if k % 2 == 0 else (d > 0) for k, d in enumerate(leading_minors(m)))


@dataclass(frozen=True)
class Invariants:
    derived_dim: int
    center_dim: int
    unimodular: bool
    killing: Mat

    def to_json(self) -> dict:
        return {
            "derived_dim": self.derived_dim,
            "center_dim": self.center_dim,
            "unimodular": self.unimodular,
            "killing": self.killing.to_json(),
            "killing_negative_definite": is_negative_definite(self.killing),
        }


def is_unimodular(c: StructureTensor) -> bool:
    return all(c.ad(i).trace() == 0 for i in range(c.n))


def invariants(c: StructureTensor) -> Invariants:
    return Invariants(
        derived_dim=len(derived_algebra(c)),
        center_dim=len(center(c)),
        unimodular=is_unimodular(c),
        killing=killing_form(c),
    )


def is_subalgebra(c: StructureTensor, vectors: Sequence) -> bool:
    vectors = [tuple(Q(x) for x in v) for v in vectors]
    if not vectors:
        return True
    if rank(Mat.from_columns(vectors)) != len(vectors):
        raise DependentBasis("subalgebra basis vectors are linearly dependent")
    for a, b in combinations(vectors, 2):
        if coordinates(vectors, c.bracket(a, b)) is None:
            return False
    return True


LABELS = ("3g1", "g2.1+g1", "g3.1", "g3.2", "g3.3", "g3.4", "g3.5", "g3.6", "g3.7")
FAMILIES = ("g3.4", "g3.5")


@dataclass(frozen=True, order=True)
class AlgebraLabel:
    label: str
    k: Optional[Fraction] = field(default=None)

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")
        if (self.k is not None) != (self.label in FAMILIES):
            raise ValueError("family invariant is required exactly for g3.4 and g3.5")
        if self.label == "g3.4" and 0 < self.k <= 4:
            raise ValueError("g3.4 invariant lies in (-inf, 0] or (4, inf)")
        if self.label == "g3.5" and not 0 <= self.k < 4:
            raise ValueError("g3.5 invariant lies in [0, 4)")

    def __str__(self) -> str:
        return self.label if self.k is None else f"{self.label}[k={fmt(self.k)}]"

    def to_json(self) -> dict:
        return {"label": self.label, "k": None if self.k is None else fmt(self.k)}


def identify3(c: StructureTensor) -> AlgebraLabel:
    """Mubarakzyanov label of a real three-dimensional Lie algebra.

    For the almost Abelian families g3.4 and g3.5 the invariant is
    k = tr(M)^2 / det(M), where M is ad_x restricted to the derived algebra
    for any x outside it. The family is fixed by the sign of the discriminant
    tr(M)^2 - 4 det(M): real distinct eigenvalues give g3.4, complex ones g3.5.
    """
    if c.n != 3:
        raise WrongDimension(f"identify3 needs a 3-dimensional algebra, got {c.n}")
    der = derived_algebra(c)
    d = len(der)
    if d == 0:
        return AlgebraLabel("3g1")
    if d == 1:
        z = center(c)
        return AlgebraLabel("g3.1" if coordinates(z, der[0]) is not None else "g2.1+g1")
    if d == 2:
        x = next(e for e in basis(3) if coordinates(der, e) is None)
        cols = []
        for v in der:
            w = coordinates(der, c.bracket(x, v))
            if w is None:
                raise ValueError("derived algebra is not an ideal; tensor violates Jacobi")
            cols.append(w)
        m = Mat.from_columns(cols)
        tr, det = m.trace(), m.det()
        if m[0, 1] == 0 and m[1, 0] == 0 and m[0, 0] == m[1, 1]:
            return AlgebraLabel("g3.3")
        if det == 0:
            raise ValueError("degenerate action on a 2-dimensional derived algebra; tensor is not a Lie algebra")
        disc = tr * tr - 4 * det
        if disc == 0:
            return AlgebraLabel("g3.2")
        return AlgebraLabel("g3.4" if disc > 0 else "g3.5", tr * tr / det)
    return AlgebraLabel("g3.7" if is_negative_definite(killing_form(c)) else "g3.6")


def direct_sum_algebras(a: StructureTensor, b: StructureTensor) -> StructureTensor:
    n = a.n + b.n
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(a.n):
        for j in range(a.n):
            for k in range(a.n):
                c[i][j][k] = a.c[i][j][k]
    off = a.n
    for i in range(b.n):
        for j in range(b.n):
            for k in range(b.n):
                c[off + i][off + j][off + k] = b.c[i][j][k]
    return StructureTensor(c)


def almost_abelian(m: Mat) -> StructureTensor:
    """Algebra on e_1..e_{k}, e_{k+1} where e_{k+1} acts on the Abelian ideal by ``m``."""
    k = m.n
    n = k + 1
    brackets = {}
    for j in range(k):
        col = m.col(j)
        if any(col):
            brackets[(n, j + 1)] = {i + 1: col[i] for i in range(k) if col[i]}
    return StructureTensor.from_brackets(n, brackets)
