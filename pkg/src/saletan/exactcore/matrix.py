"""Dense immutable matrices over the rationals and over rational functions in eps."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .poly import EPS, EpsPoly, EpsRatFun, NoLimit, limit_quotient, ratfun
from .scalar import ONE, ZERO, Q, fmt


class SingularMatrix(ArithmeticError):
    pass


class IdenticallySingular(SingularMatrix):
    """Determinant vanishes identically as a function of eps."""


def _gauss_inverse(rows, zero, one):
    n = len(rows)
    a = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col:
                f = a[r][col]
                if f != 0:
                    pr = a[col]
                    a[r] = [x - f * y for x, y in zip(a[r], pr)]
    return [row[n:] for row in a]


def _gauss_det(rows, one):
    a = [list(r) for r in rows]
    n = len(a)
    det = one
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return det * 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        for r in range(col + 1, n):
            f = a[r][col]
            if f != 0:
                f = f / p
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


class Mat:
    """Rectangular matrix of :class:`Fraction` entries, stored row-major."""

    __slots__ = ("rows", "shape")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(Q(x) for x in r) for r in rows)
        ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix rows")
        self.shape = (len(self.rows), ncols)

    @classmethod
    def _raw(cls, rows) -> "Mat":
        m = object.__new__(cls)
        m.rows = tuple(tuple(r) for r in rows)
        m.shape = (len(m.rows), len(m.rows[0]) if m.rows else 0)
        return m

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls._raw([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Mat":
        return cls._raw([[ZERO] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def diag(cls, entries: Sequence) -> "Mat":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Mat":
        if not cols:
            raise ValueError("no columns")
        return cls([[c[i] for c in cols] for i in range(len(cols[0]))])

    @classmethod
    def jordan0(cls, n: int) -> "Mat":
        """Nilpotent Jordan block: ones on the superdiagonal, e_i -> e_{i-1}."""
        return cls._raw([[ONE if j == i + 1 else ZERO for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        if self.shape[0] != self.shape[1]:
            raise ValueError("matrix is not square")
        return self.shape[0]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list:
        return [self.col(j) for j in range(self.shape[1])]

    @property
    def T(self) -> "Mat":
        return Mat._raw(zip(*self.rows)) if self.rows else self

    def __eq__(self, other) -> bool:
        if isinstance(other, Mat):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.rows)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat._raw([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Mat._raw([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Mat":
        return Mat._raw([[-x for x in r] for r in self.rows])

    def __mul__(self, s) -> "Mat":
        s = Q(s)
        return Mat._raw([[s * x for x in r] for r in self.rows])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.shape[1] != other.shape[0]:
                raise ValueError("shape mismatch in matrix product")
            cols = other.columns()
            return Mat._raw(
                [[sum((a * b for a, b in zip(r, c) if a and b), ZERO) for c in cols] for r in self.rows]
            )
        v = tuple(other)
        if len(v) != self.shape[1]:
            raise ValueError("shape mismatch in matrix-vector product")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self.rows)

    def __pow__(self, k: int) -> "Mat":
        if k < 0:
            return self.inverse() ** (-k)
        out = Mat.identity(self.n)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def det(self) -> Fraction:
        return _gauss_det(self.rows, ONE) if self.n else ONE

    def is_invertible(self) -> bool:
        return self.det() != 0

    def inverse(self) -> "Mat":
        return Mat._raw(_gauss_inverse(self.rows, ZERO, ONE))

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.n)), ZERO)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat._raw([[self.rows[i][j] for j in cols] for i in rows])

    def to_json(self) -> list:
        return [[fmt(x) for x in r] for r in self.rows]

    def __repr__(self) -> str:
        return "Mat(" + repr(self.to_json()) + ")"


def direct_sum(*blocks: Mat) -> Mat:
    n = sum(b.n for b in blocks)
    rows = [[ZERO] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                rows[off + i][off + j] = b.rows[i][j]
        off += b.n
    return Mat._raw(rows)


class EpsMatrix:
    """Square matrix whose entries are rational functions of eps."""

    __slots__ = ("rows", "n")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = tuple(tuple(ratfun(x) for x in r) for r in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("EpsMatrix must be square")

    @classmethod
    def linear(cls, b: Mat, a: Mat) -> "EpsMatrix":
        """The matrix-function b + eps*a."""
        if b.shape != a.shape:
            raise ValueError("shape mismatch")
        return cls(
            [[EpsRatFun(EpsPoly((x, y))) for x, y in zip(rb, ra)] for rb, ra in zip(b.rows, a.rows)]
        )

    @classmethod
    def constant(cls, m: Mat) -> "EpsMatrix":
        return cls.linear(m, Mat.zeros(m.n))

    @classmethod
    def identity(cls, n: int) -> "EpsMatrix":
        return cls.constant(Mat.identity(n))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if isinstance(other, EpsMatrix):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.rows)

    def __add__(self, other: "EpsMatrix") -> "EpsMatrix":
        return EpsMatrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, _eps(other).rows)])

    def __sub__(self, other: "EpsMatrix") -> "EpsMatrix":
        return EpsMatrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, _eps(other).rows)])

    def scale(self, s) -> "EpsMatrix":
        s = ratfun(s)
        return EpsMatrix([[s * x for x in r] for r in self.rows])

    def __matmul__(self, other) -> "EpsMatrix":
        other = _eps(other)
        cols = list(zip(*other.rows))
        zero = ratfun(0)
        return EpsMatrix(
            [[sum((a * b for a, b in zip(r, c) if a and b), zero) for c in cols] for r in self.rows]
        )

    def __rmatmul__(self, other) -> "EpsMatrix":
        return _eps(other) @ self

    def det(self) -> EpsRatFun:
        return ratfun(_gauss_det(self.rows, ratfun(1)))

    def inverse(self) -> "EpsMatrix":
        """Exact inverse over the rational-function field."""
        if self.det().is_zero():
            raise IdenticallySingular("determinant is identically zero in eps")
        return EpsMatrix(_gauss_inverse(self.rows, ratfun(0), ratfun(1)))

    def at(self, x) -> Mat:
        """Evaluate at a rational value of eps."""
        return Mat([[f(x) for f in r] for r in self.rows])

    def limit(self) -> Mat:
        """Entrywise limit at eps -> 0; raises :class:`NoLimit` on any pole."""
        return Mat([[limit_quotient(f.num, f.den) for f in r] for r in self.rows])

    def has_finite_limit(self) -> bool:
        try:
            self.limit()
        except NoLimit:
            return False
        return True

    def is_linear(self) -> bool:
        """True when every entry is a polynomial of degree at most one."""
        return all(f.is_polynomial() and f.num.degree <= 1 for r in self.rows for f in r)

    def linear_parts(self) -> tuple:
        """Return ``(B, A)`` with self = B + eps*A; requires :meth:`is_linear`."""
        if not self.is_linear():
            raise ValueError("matrix-function is not linear in eps")
        b = self.at(0)
        return b, self.at(1) - b

    def common_denominator(self) -> EpsPoly:
        """Monic lcm of all entry denominators."""
        from .poly import poly_gcd

        d = EpsPoly.const(1)
        for r in self.rows:
            for f in r:
                if f.den.degree > 0:
                    d = d * f.den // poly_gcd(d, f.den)
        return d.monic()

    def polynomial_rows(self, d: EpsPoly) -> list:
        """Entries multiplied by ``d`` as plain polynomials."""
        out = []
        for r in self.rows:
            row = []
            for f in r:
                q, rem = divmod(f.num * d, f.den)
                if not rem.is_zero():
                    raise ValueError("d is not a common denominator")
                row.append(q)
            out.append(row)
        return out

    def to_json(self) -> list:
        return [[_ratfun_str(f) for f in r] for r in self.rows]

    def __repr__(self) -> str:
        return "EpsMatrix(" + repr(self.to_json()) + ")"


def _eps(m) -> EpsMatrix:
    if isinstance(m, EpsMatrix):
        return m
    if isinstance(m, Mat):
        return EpsMatrix.constant(m)
    raise TypeError(f"expected a matrix, got {type(m).__name__}")


def _poly_str(p: EpsPoly) -> str:
    if p.is_zero():
        return "0"
    terms = []
    for i, c in enumerate(p.coeffs):
        if not c:
            continue
        s = fmt(c)
        if i == 0:
            terms.append(s)
        else:
            mono = "eps" if i == 1 else f"eps^{i}"
            terms.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{s}*{mono}")
    return " + ".join(terms).replace("+ -", "- ")


def _ratfun_str(f: EpsRatFun) -> str:
    if f.is_polynomial():
        return _poly_str(f.num)
    return f"({_poly_str(f.num)})/({_poly_str(f.den)})"


def jordan_eps(n: int) -> EpsMatrix:
    """J_eps^n: eps on the diagonal, ones on the superdiagonal."""
    return EpsMatrix.linear(Mat.jordan0(n), Mat.identity(n))


__all__ = [
    "EPS",
    "EpsMatrix",
    "IdenticallySingular",
    "Mat",
    "SingularMatrix",
    "direct_sum",
    "jordan_eps",
]
