"""Canonical forms, signatures and subalgebra chains of linear contraction matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .contraction import ContractionSpec, limit_oracle
from .exactcore import (
    EpsMatrix,
    Mat,
    direct_sum,
    fitting_split,
    image,
    jordan_eps,
    nilpotent_jordan,
    partition_from_ranks,
    rank,
    rank_sequence,
)
from .liealg import StructureTensor, is_subalgebra, transform


class NotAContractionMatrix(ValueError):
    pass


class SubalgebraViolation(ValueError):
    def __init__(self, m: int, message: str = ""):
        self.m = m
        super().__init__(message or f"im(u0^{m}) is not a subalgebra")


@dataclass(frozen=True)
class Signature:
    n0: int
    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if self.n0 < 0 or any(p < 1 for p in parts):
            raise ValueError("signature entries must be positive (n0 may be zero)")
        if list(parts) != sorted(parts, reverse=True):
            raise ValueError("signature parts must be sorted in descending order")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, n0: int, parts=()) -> "Signature":
        return cls(n0, tuple(sorted(parts, reverse=True)))

    @property
    def n(self) -> int:
        return self.n0 + sum(self.parts)

    @property
    def proper(self) -> bool:
        return self.n0 < self.n

    @property
    def height(self) -> int:
        """m0 = max part (zero when there are no nilpotent blocks)."""
        return max(self.parts, default=0)

    def chain_dims(self) -> list:
        """dim s_m = n - l_1 - ... - l_m with l_m = #{parts >= m}, for m = 0..m0."""
        dims = [self.n]
        for m in range(1, self.height + 1):
            dims.append(dims[-1] - sum(1 for p in self.parts if p >= m))
        return dims

    def __str__(self) -> str:
        if not self.parts:
            return f"({self.n0})"
        return f"({self.n0}; " + ",".join(str(p) for p in self.parts) + ")"

    def to_json(self) -> list:
        return [self.n0, list(self.parts)]


def all_signatures(n: int) -> list:
    """Every signature of dimension n, n0 descending then partitions in reverse lex order."""

    def partitions(m, largest):
        if m == 0:
            yield ()
            return
        for p in range(min(m, largest), 0, -1):
            for rest in partitions(m - p, p):
                yield (p,) + rest

    return [Signature(n0, parts) for n0 in range(n, -1, -1) for parts in partitions(n - n0, n - n0)]


def canonical_u0(sig: Signature) -> Mat:
    """E^n0 (+) J_0^n1 (+) ... (+) J_0^ns."""
    return direct_sum(Mat.identity(sig.n0), *[Mat.jordan0(p) for p in sig.parts])


def canonical_matrix(sig: Signature, form: str = "first") -> EpsMatrix:
    """First form E^n0 (+) J_eps^n1 (+) ...; second form canonical_u0 + eps*E."""
    if form == "first":
        blocks = [EpsMatrix.identity(sig.n0)] if sig.n0 else []
        blocks += [jordan_eps(p) for p in sig.parts]
        return _eps_direct_sum(blocks)
    if form == "second":
        return EpsMatrix.linear(canonical_u0(sig), Mat.identity(sig.n))
    raise ValueError("form must be 'first' or 'second'")


def _eps_direct_sum(blocks) -> EpsMatrix:
    n = sum(b.n for b in blocks)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                rows[off + i][off + j] = b[i, j]
        off += b.n
    return EpsMatrix(rows)


def signature_of_u0(u0: Mat) -> Signature:
    """n0 = rank(u0^n); parts = Jordan partition of u0 on its Fitting null component."""
    fs = fitting_split(u0)
    parts = partition_from_ranks(rank_sequence(fs.w0)) if fs.w0.shape[0] else ()
    return Signature(fs.n0, parts)


@dataclass(frozen=True)
class CanonicalFactorization:
    """u ~ left . S_eps . right, with S_eps the second canonical form of ``signature``.

    ``lam`` is the reparametrization applied before the reduction (0 if none) and
    ``u0`` the normalized value A'^-1 B at eps = 0 whose Fitting/Jordan data
    give the signature.
    """

    left: Mat
    signature: Signature
    right: Mat
    lam: Fraction
    u0: Mat

    def canonical(self, form: str = "second") -> EpsMatrix:
        return canonical_matrix(self.signature, form)

    def realized(self) -> EpsMatrix:
        return EpsMatrix.constant(self.left) @ self.canonical() @ EpsMatrix.constant(self.right)

    def to_json(self) -> dict:
        from .exactcore import fmt

        return {
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "signature": self.signature.to_json(),
            "signature_str": str(self.signature),
            "lambda": fmt(self.lam),
            "u0": self.u0.to_json(),
        }

    def limit_via_canonical(self, c: StructureTensor):
        """Limit of ``c o u`` computed through the canonical part.

        transform(c, left) is contracted by S_eps, and the limit is carried
        back through ``right``. Returns None when the limit does not exist.
        """
        res = limit_oracle(ContractionSpec(transform(c, self.left), self.canonical()))
        if not res.exists:
            return None
        return transform(res.limit, self.right)


_LAMBDAS = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(-1, 2), Fraction(1, 3)]


def canonicalize(u: EpsMatrix):
    """Factor a linear contraction matrix u = B + eps*A into canonical form.

    If A is singular, u is first reparametrized to B + eps*(A + lam*B) with the
    first lam > -1 from a fixed list making the eps-coefficient invertible
    (lam = 1 is the normalization by the value at eps = 1). Then
    u = A (U0 + eps E) with U0 = A^-1 B; the Fitting split of U0 and the Jordan
    form of its nilpotent part give u ~ left . S_eps . right.
    """
    if not u.is_linear():
        raise NotAContractionMatrix("canonicalize needs a matrix-function linear in eps")
    b, a = u.linear_parts()
    n = b.n
    lam = Fraction(0)
    if not a.is_invertible():
        for cand in _LAMBDAS:
            if (a + cand * b).is_invertible():
                lam = cand
                a = a + cand * b
                break
        else:
            raise NotAContractionMatrix("no reparametrization makes the eps-coefficient invertible")
    u0 = a.inverse() @ b
    fs = fitting_split(u0)
    k = fs.n0
    p = fs.change_of_basis
    if k < n:
        parts, q = nilpotent_jordan(fs.w0)
    else:
        parts, q = (), Mat._raw([])
    r = direct_sum(Mat.identity(k), q)
    w1_block = direct_sum(fs.w1, Mat.identity(n - k))
    left = a @ p @ r
    right = r.inverse() @ w1_block @ p.inverse()
    sig = Signature(k, parts)
    return CanonicalFactorization(left, sig, right, lam, u0), sig


def subalgebra_chain(c: StructureTensor, u0: Mat) -> list:
    """Chain s_m = im(u0^m), m = 0..m0, each verified to be a subalgebra.

    Returns ``[(dim, basis), ...]``; raises :class:`SubalgebraViolation` at the
    first power whose image is not closed under the bracket, and also when the
    dimensions disagree with the signature formula.
    """
    sig = signature_of_u0(u0)
    expected = sig.chain_dims()
    out = []
    power = Mat.identity(c.n)
    for m in range(sig.height + 1):
        if m:
            power = power @ u0
        b = image(power)
        if not is_subalgebra(c, b):
            raise SubalgebraViolation(m)
        if len(b) != expected[m]:
            raise SubalgebraViolation(m, f"dim im(u0^{m}) = {len(b)}, signature predicts {expected[m]}")
        out.append((len(b), b))
    assert out[-1][0] == sig.n0 == rank(u0 ** c.n)
    return out
