"""Sturm sequences for counting real roots of rational polynomials."""

from __future__ import annotations

from fractions import Fraction

from .poly import EpsPoly, poly_gcd


def sturm_sequence(p: EpsPoly) -> list:
    if p.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _sign_changes(seq, x: Fraction) -> int:
    signs = [s for s in (q(x) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(p: EpsPoly, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise ValueError("empty interval")
    if p.degree <= 0:
        return 0
    # squarefree part keeps the count of distinct roots exact at endpoints
    sq = p // poly_gcd(p, p.derivative())
    if sq(lo) == 0:
        # strip the root at lo, it lies outside (lo, hi]
        sq = sq // EpsPoly((-lo, 1))
        if sq.degree <= 0:
            return 0
    seq = sturm_sequence(sq)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)
