"""Contractions of Lie algebras by matrix-functions of eps.

Two independent routes to a contracted algebra live here: ``limit_oracle``
expands every deformed structure constant as a rational function of eps and
takes the limit entry by entry, while ``contracted_bracket`` evaluates the
closed formula for linear matrix-functions u0 + eps*E through the Fitting
split of u0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Optional

from .exactcore import (
    EpsMatrix,
    EpsPoly,
    EpsRatFun,
    IdenticallySingular,
    Mat,
    NoLimit,
    Q,
    count_roots,
    fitting_split,
    fmt,
    limit_quotient,
)
from .exactcore.scalar import ZERO
from .liealg import StructureTensor, basis, derived_algebra, is_unimodular, validate


class ConditionViolated(ValueError):
    """The Saletan condition fails, so u0 + eps*E does not contract the algebra."""

    def __init__(self, message: str, residuals=(), step: Optional[int] = None):
        super().__init__(message)
        self.residuals = list(residuals)
        self.step = step


class ContractionNoLimit(NoLimit):
    def __init__(self, poles):
        self.poles = list(poles)
        super().__init__(f"no limit: negative valuation at (i,j,k) = {self.poles}")


class InvalidLambda(ValueError):
    pass


class NoFiniteLimit(ValueError):
    pass


class FactorMismatch(ValueError):
    pass


# polynomial determinant / adjugate by Laplace expansion over column subsets


def _poly_minor_table(rows, n):
    one = EpsPoly.const(1)
    table = {(): one}
    cols = range(n)
    for size in range(1, n + 1):
        r = n - size  # expand along row r using the last `size` rows
        for subset in combinations(cols, size):
            acc = EpsPoly()
            for pos, col in enumerate(subset):
                a = rows[r][col]
                if a.is_zero():
                    continue
                rest = subset[:pos] + subset[pos + 1:]
                term = a * table[rest]
                acc = acc - term if pos % 2 else acc + term
            table[subset] = acc
    return table


def poly_det(rows) -> EpsPoly:
    n = len(rows)
    return _poly_minor_table(rows, n)[tuple(range(n))]


def poly_adjugate(rows) -> list:
    """Adjugate of a polynomial matrix: adj[j][i] = (-1)^(i+j) minor(i, j)."""
    n = len(rows)
    adj = [[EpsPoly() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        sub = [rows[r] for r in range(n) if r != i]
        for j in range(n):
            cols = [c for c in range(n) if c != j]
            minor_rows = [[row[c] for c in cols] for row in sub]
            m = poly_det(minor_rows) if n > 1 else EpsPoly.const(1)
            adj[j][i] = -m if (i + j) % 2 else m
    return adj


@dataclass(frozen=True)
class ContractionSpec:
    initial: StructureTensor
    u: EpsMatrix

    def __post_init__(self):
        if self.u.n != self.initial.n:
            raise ValueError("matrix and algebra dimensions differ")
        d = self.u.common_denominator()
        if poly_det(self.u.polynomial_rows(d)).is_zero():
            raise IdenticallySingular("contraction matrix has identically zero determinant")

    @classmethod
    def linear(cls, initial: StructureTensor, b: Mat, a: Mat) -> "ContractionSpec":
        return cls(initial, EpsMatrix.linear(b, a))

    def is_saletan(self) -> bool:
        return self.u.is_linear()


@dataclass(frozen=True)
class ContractionResult:
    limit: Optional[StructureTensor]
    exists: bool
    valuations: dict  # (i, j, k) 1-based, i < j -> valuation or None for identically zero
    poles: tuple
    violations: tuple = field(default=())
    numerators: dict = field(default_factory=dict, repr=False, compare=False)
    denominator: Optional[EpsPoly] = field(default=None, repr=False, compare=False)

    def tensor(self) -> StructureTensor:
        if not self.exists:
            raise ContractionNoLimit(self.poles)
        return self.limit

    def deformed_entry(self, i: int, j: int, k: int) -> EpsRatFun:
        """Reduced c^k_{eps,ij} (1-based indices, any order of i, j)."""
        if i == j:
            return EpsRatFun(0)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        return EpsRatFun(self.numerators[(i, j, k)] * sign, self.denominator)

    def to_json(self) -> dict:
        return {
            "exists": self.exists,
            "limit": self.limit.to_json() if self.limit is not None else None,
            "poles": [list(p) for p in self.poles],
            "valuations": {f"{i},{j},{k}": v for (i, j, k), v in sorted(self.valuations.items())},
        }


def limit_oracle(spec: ContractionSpec) -> ContractionResult:
    """Entrywise limit at eps -> 0 of the structure constants of ``initial o u``.

    With u = P/d for a polynomial matrix P and common denominator d,
    c^k_{eps,ij} = (P^a_i P^b_j adj(P)^k_m c^m_ab) / (d det P).
    """
    c, u = spec.initial, spec.u
    n = c.n
    d = u.common_denominator()
    p = u.polynomial_rows(d)
    detp = poly_det(p)
    adj = poly_adjugate(p)
    den = d * detp
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b and any(c.c[a][b])]
    numerators = {}
    valuations = {}
    poles = []
    limit = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    zero = EpsPoly()
    for i, j in combinations(range(n), 2):
        v = [zero] * n
        for a, b in pairs:
            pa, pb = p[a][i], p[b][j]
            if pa.is_zero() or pb.is_zero():
                continue
            w = pa * pb
            for m, cm in enumerate(c.c[a][b]):
                if cm:
                    v[m] = v[m] + w * cm
        for k in range(n):
            num = zero
            for m in range(n):
                if not v[m].is_zero() and not adj[k][m].is_zero():
                    num = num + adj[k][m] * v[m]
            key = (i + 1, j + 1, k + 1)
            numerators[key] = num
            if num.is_zero():
                valuations[key] = None
                continue
            valuations[key] = num.order() - den.order()
            try:
                lim = limit_quotient(num, den)
            except NoLimit:
                poles.append(key)
                continue
            limit[i][j][k] = lim
            limit[j][i][k] = -lim
    if poles:
        return ContractionResult(None, False, valuations, tuple(poles), (), numerators, den)
    tensor = StructureTensor(limit)
    return ContractionResult(tensor, True, valuations, (), tuple(validate(tensor)), numerators, den)


def nonsingular_on_unit_interval(u: EpsMatrix) -> bool:
    """Sturm-certified check that det u(eps) != 0 and u is defined for eps in (0, 1]."""
    d = u.common_denominator()
    detp = poly_det(u.polynomial_rows(d))
    return count_roots(detp * d, 0, 1) == 0


def _is_second_canonical(u0: Mat) -> Optional[int]:
    """n0 when u0 = E^n0 (+) nilpotent Jordan blocks (ones on the superdiagonal), else None."""
    n = u0.n
    n0 = 0
    while n0 < n and u0[n0, n0] == 1:
        n0 += 1
    for i in range(n):
        for j in range(n):
            x = u0[i, j]
            if i == j:
                if x != (1 if i < n0 else 0):
                    return None
            elif j == i + 1 and i >= n0:
                if x not in (0, 1):
                    return None
            elif x != 0:
                return None
    return n0


@dataclass(frozen=True)
class _Split:
    proj_null: Mat  # projection onto V0 along V1
    w1_inv: Mat  # inverse of u0 on V1, extended by zero on V0


def _split(u0: Mat) -> _Split:
    n = u0.n
    n0 = _is_second_canonical(u0)
    if n0 is not None:
        return _Split(Mat.diag([0] * n0 + [1] * (n - n0)), Mat.diag([1] * n0 + [0] * (n - n0)))
    fs = fitting_split(u0)
    p = fs.change_of_basis
    pinv = p.inverse()
    k = fs.n0
    sel = Mat.diag([0] * k + [1] * (n - k))
    w1i = fs.w1.inverse() if k else Mat._raw([])
    g = Mat._raw([[w1i[i, j] if i < k and j < k else ZERO for j in range(n)] for i in range(n)])
    return _Split(p @ sel @ pinv, p @ g @ pinv)


def saletan_condition(c: StructureTensor, u0: Mat) -> list:
    """Nonzero residuals of U0^2[x,y]^0 - U0[U0x,y]^0 - U0[x,U0y]^0 + [U0x,U0y]^0.

    Evaluated on basis pairs x = e_i, y = e_j with i < j; returns a list of
    ``(i, j, residual_vector)`` with 1-based indices. Empty means the condition holds.
    """
    n = c.n
    if u0.shape != (n, n):
        raise ValueError("dimension mismatch")
    sp = _split(u0)
    p0 = sp.proj_null
    u0sq = u0 @ u0
    cols = u0.columns()
    e = basis(n)
    out = []
    for i, j in combinations(range(n), 2):
        xy = c.bracket(e[i], e[j])
        t1 = u0sq @ (p0 @ xy)
        t2 = u0 @ (p0 @ c.bracket(cols[i], e[j]))
        t3 = u0 @ (p0 @ c.bracket(e[i], cols[j]))
        t4 = p0 @ c.bracket(cols[i], cols[j])
        r = tuple(a - b - cc + d for a, b, cc, d in zip(t1, t2, t3, t4))
        if any(r):
            out.append((i + 1, j + 1, r))
    return out


def contracted_bracket(c: StructureTensor, u0: Mat) -> StructureTensor:
    """Closed-form limit of ``c o (u0 + eps*E)``.

    [x,y]_0 = W1^-1 [U0x,U0y]^1 - W0 [x,y]^0 + [U0x,y]^0 + [x,U0y]^0
    """
    residuals = saletan_condition(c, u0)
    if residuals:
        raise ConditionViolated("Saletan condition fails", residuals)
    n = c.n
    sp = _split(u0)
    p0 = sp.proj_null
    cols = u0.columns()
    e = basis(n)
    out = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i, j in combinations(range(n), 2):
        a = sp.w1_inv @ c.bracket(cols[i], cols[j])
        b = u0 @ (p0 @ c.bracket(e[i], e[j]))
        s = p0 @ tuple(x + y for x, y in zip(c.bracket(cols[i], e[j]), c.bracket(e[i], cols[j])))
        v = [x - y + z for x, y, z in zip(a, b, s)]
        out[i][j] = v
        out[j][i] = [-x for x in v]
    return StructureTensor(out)


def saletan_spec(c: StructureTensor, u0: Mat) -> ContractionSpec:
    """The linear matrix-function u0 + eps*E acting on ``c``."""
    return ContractionSpec.linear(c, u0, Mat.identity(c.n))


def reparametrize(spec: ContractionSpec, lam) -> ContractionSpec:
    """Replace B + eps*A by B + eps*(A + lam*B), lam > -1."""
    lam = Q(lam)
    if lam <= -1:
        raise InvalidLambda("reparametrization needs lambda > -1")
    b, a = spec.u.linear_parts()
    return ContractionSpec.linear(spec.initial, b, a + lam * b)


def factor_out(spec: ContractionSpec, check: EpsMatrix, hat: Optional[EpsMatrix] = None) -> ContractionSpec:
    """Replace u = hat . check by hat . check(0) when check has an invertible limit.

    If ``hat`` is not supplied it is recovered as u . check^-1.
    """
    try:
        check0 = check.limit()
    except NoLimit:
        raise NoFiniteLimit("right factor has no finite limit at eps = 0") from None
    if not check0.is_invertible():
        raise NoFiniteLimit("limit of the right factor is singular")
    if hat is None:
        hat = spec.u @ check.inverse()
    elif hat @ check != spec.u:
        raise FactorMismatch("hat . check does not reproduce the contraction matrix")
    return ContractionSpec(spec.initial, hat @ check0)


def iterate(c: StructureTensor, u0: Mat, times: int) -> list:
    """Apply ``contracted_bracket`` with the same u0 repeatedly."""
    chain = []
    cur = c
    for step in range(1, times + 1):
        residuals = saletan_condition(cur, u0)
        if residuals:
            raise ConditionViolated(f"Saletan condition fails at step {step}", residuals, step=step)
        cur = contracted_bracket(cur, u0)
        chain.append(cur)
    return chain


@dataclass(frozen=True)
class Audit:
    valid: bool
    derived_nonincreasing: bool
    unimodularity_preserved: bool

    @property
    def ok(self) -> bool:
        return self.valid and self.derived_nonincreasing and self.unimodularity_preserved

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "derived_nonincreasing": self.derived_nonincreasing,
            "unimodularity_preserved": self.unimodularity_preserved,
        }


def audit(initial: StructureTensor, limit: StructureTensor) -> Audit:
    """Semicontinuity checks every contraction must pass."""
    return Audit(
        valid=not validate(limit),
        derived_nonincreasing=len(derived_algebra(limit)) <= len(derived_algebra(initial)),
        unimodularity_preserved=(not is_unimodular(initial)) or is_unimodular(limit),
    )


def is_permutation_equivalent(a: StructureTensor, b: StructureTensor) -> Optional[Mat]:
    """A permutation matrix p with transform(a, p) == b, if one exists."""
    from .liealg import transform

    n = a.n
    for perm in permutations(range(n)):
        p = Mat._raw([[Fraction(1) if perm[j] == i else ZERO for j in range(n)] for i in range(n)])
        if transform(a, p) == b:
            return p
    return None


def residuals_to_json(residuals) -> list:
    return [{"pair": [i, j], "residual": [fmt(x) for x in r]} for i, j, r in residuals]
