"""Univariate polynomials and rational functions in the contraction parameter."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .scalar import ONE, ZERO, Q


class NoLimit(ArithmeticError):
    """A rational function has a pole at zero, so its limit does not exist."""


def _trim(coeffs: Sequence[Fraction]) -> tuple:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


class EpsPoly:
    """Polynomial in eps with rational coefficients, lowest degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim([Q(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs) -> "EpsPoly":
        p = object.__new__(cls)
        p.coeffs = _trim(coeffs)
        return p

    @classmethod
    def const(cls, c) -> "EpsPoly":
        return cls((c,))

    @classmethod
    def eps(cls) -> "EpsPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else ZERO

    def order(self) -> int:
        """Multiplicity of eps = 0 as a root; raises for the zero polynomial."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("order of the zero polynomial is undefined")

    def __call__(self, x) -> Fraction:
        x = Q(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, EpsPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim((Fraction(other),))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __neg__(self) -> "EpsPoly":
        return EpsPoly._raw([-c for c in self.coeffs])

    def __add__(self, other) -> "EpsPoly":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return EpsPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "EpsPoly":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "EpsPoly":
        return (-self) + other

    def __mul__(self, other) -> "EpsPoly":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return EpsPoly._raw(())
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return EpsPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "EpsPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = EpsPoly._raw((ONE,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: "EpsPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lb = other.lead
        if len(rem) - 1 < db:
            return EpsPoly._raw(()), self
        quot = [ZERO] * (len(rem) - db)
        for shift in range(len(rem) - 1 - db, -1, -1):
            c = rem[shift + db] / lb
            quot[shift] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[shift + j] -= c * b
        return EpsPoly._raw(quot), EpsPoly._raw(rem[:db])

    def __floordiv__(self, other: "EpsPoly") -> "EpsPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "EpsPoly") -> "EpsPoly":
        return divmod(self, other)[1]

    def monic(self) -> "EpsPoly":
        if self.is_zero():
            return self
        lc = self.lead
        return EpsPoly._raw([c / lc for c in self.coeffs])

    def derivative(self) -> "EpsPoly":
        return EpsPoly._raw([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift_down(self, k: int) -> "EpsPoly":
        """Divide by eps**k; the low coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError("polynomial not divisible by that power of eps")
        return EpsPoly._raw(self.coeffs[k:])

    def __repr__(self) -> str:
        if not self.coeffs:
            return "EpsPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*eps^{i}")
        return "EpsPoly(" + " + ".join(terms) + ")"


def _as_poly(x) -> Union[EpsPoly, None]:
    if isinstance(x, EpsPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return EpsPoly._raw((Fraction(x),))
    return None


def poly_gcd(a: EpsPoly, b: EpsPoly) -> EpsPoly:
    """Monic gcd over the rationals (zero only if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
        # keep coefficient growth in check
        b = b.monic()
    return a.monic()


class EpsRatFun:
    """Reduced quotient of two :class:`EpsPoly` with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_poly(num)
        if num is None:
            raise TypeError("numerator must be a polynomial or scalar")
        if den is None:
            self.num, self.den = num, EpsPoly._raw((ONE,))
            return
        den = _as_poly(den)
        if den is None or den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, EpsPoly._raw((ONE,))
            return
        if den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        lc = den.lead
        if lc != 1:
            num = EpsPoly._raw([c / lc for c in num.coeffs])
            den = EpsPoly._raw([c / lc for c in den.coeffs])
        self.num, self.den = num, den

    @classmethod
    def _poly(cls, p: EpsPoly) -> "EpsRatFun":
        r = object.__new__(cls)
        r.num, r.den = p, EpsPoly._raw((ONE,))
        return r

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def valuation(self) -> int:
        """ord_0(num) - ord_0(den); the zero function has no valuation."""
        if self.num.is_zero():
            raise ValueError("valuation of the zero function is undefined")
        return self.num.order() - self.den.order()

    def __call__(self, x) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at eps={x}")
        return self.num(x) / d

    def __eq__(self, other) -> bool:
        if isinstance(other, EpsRatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, EpsPoly)):
            return self.is_polynomial() and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __neg__(self) -> "EpsRatFun":
        r = object.__new__(EpsRatFun)
        r.num, r.den = -self.num, self.den
        return r

    def __add__(self, other) -> "EpsRatFun":
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if self.is_polynomial() and other.is_polynomial():
            return EpsRatFun._poly(self.num + other.num)
        if self.den == other.den:
            return EpsRatFun(self.num + other.num, self.den)
        return EpsRatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other) -> "EpsRatFun":
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "EpsRatFun":
        return (-self) + other

    def __mul__(self, other) -> "EpsRatFun":
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if self.is_polynomial() and other.is_polynomial():
            return EpsRatFun._poly(self.num * other.num)
        return EpsRatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "EpsRatFun":
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return EpsRatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "EpsRatFun":
        return _as_ratfun(other) / self

    def __repr__(self) -> str:
        if self.is_polynomial():
            return f"EpsRatFun({self.num!r})"
        return f"EpsRatFun({self.num!r} / {self.den!r})"


def _as_ratfun(x) -> Union[EpsRatFun, None]:
    if isinstance(x, EpsRatFun):
        return x
    p = _as_poly(x)
    if p is None:
        return None
    return EpsRatFun._poly(p)


def ratfun(x) -> EpsRatFun:
    r = _as_ratfun(x)
    if r is None:
        r = EpsRatFun._poly(EpsPoly.const(Q(x)))
    return r


EPS = EpsRatFun._poly(EpsPoly.eps())


def limit_quotient(num: EpsPoly, den: EpsPoly) -> Fraction:
    """Limit at eps -> 0 of num/den without reducing the quotient first."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return ZERO
    v_num, v_den = num.order(), den.order()
    if v_num > v_den:
        return ZERO
    if v_num == v_den:
        return num.coeffs[v_num] / den.coeffs[v_den]
    raise NoLimit(f"pole of order {v_den - v_num} at eps = 0")


def limit_at_zero(f) -> Fraction:
    """Limit of a rational function as eps -> 0; raises :class:`NoLimit` on a pole."""
    f = ratfun(f)
    return limit_quotient(f.num, f.den)
