from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saletan.exactcore import (
    EPS,
    EpsMatrix,
    EpsPoly,
    EpsRatFun,
    IdenticallySingular,
    Mat,
    NoLimit,
    NotNilpotent,
    Q,
    count_roots,
    direct_sum,
    fitting_split,
    fmt,
    jordan_eps,
    kernel,
    limit_at_zero,
    mat_inverse_eps,
    nilpotent_jordan,
    poly_gcd,
    rank,
    rank_sequence,
    rref,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
small_ints = st.integers(-3, 3)


def square(n, elems=small_ints):
    return st.lists(st.lists(elems, min_size=n, max_size=n), min_size=n, max_size=n).map(Mat)


polys = st.lists(rationals, min_size=0, max_size=5).map(EpsPoly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


# scalars

def test_scalar_parsing_and_formatting():
    assert Q("3/6") == Fraction(1, 2)
    assert Q(" -4 ") == -4
    assert fmt(Fraction(-3, 4)) == "-3/4"
    assert fmt(Fraction(6, 3)) == "2"
    with pytest.raises(TypeError):
        Q(0.5)
    with pytest.raises(ValueError):
        Q("0.5")
    with pytest.raises(ValueError):
        Q("1/0")


# polynomials and rational functions

def test_poly_basics():
    p = EpsPoly([1, 2, 0])
    assert p.degree == 1 and p.coeffs == (1, 2)
    assert EpsPoly().degree == -1
    assert (p * p).coeffs == (1, 4, 4)
    q, r = divmod(EpsPoly([1, 0, 1]), EpsPoly([1, 1]))
    assert q * EpsPoly([1, 1]) + r == EpsPoly([1, 0, 1])
    assert EpsPoly([0, 0, 3]).order() == 2


@given(nonzero_polys, nonzero_polys, nonzero_polys)
def test_gcd_divides_and_is_monic(a, b, c):
    g = poly_gcd(a * c, b * c)
    assert g.lead == 1
    assert ((a * c) % g).is_zero() and ((b * c) % g).is_zero()
    assert (g % c.monic()).is_zero()


def test_ratfun_reduced_and_monic():
    f = EpsRatFun(EpsPoly([0, 2]) * EpsPoly([1, 1]), EpsPoly([0, 4]) * EpsPoly([1, 1]))
    assert f.num == EpsPoly([Fraction(1, 2)]) and f.den == EpsPoly([1])
    g = EpsRatFun(EpsPoly([1]), EpsPoly([2, 2]))
    assert g.den.lead == 1


@pytest.mark.parametrize(
    "f, expected",
    [
        (EPS * EPS / EPS, 0),
        ((3 + EPS) / (1 + EPS), 3),
        (EpsRatFun(7), 7),
    ],
)
def test_limit_examples(f, expected):
    assert limit_at_zero(f) == expected


def test_limit_pole():
    with pytest.raises(NoLimit):
        limit_at_zero(1 / EPS)
    assert (1 / EPS).valuation() == -1


@settings(max_examples=60)
@given(nonzero_polys, nonzero_polys)
def test_limit_is_approached_at_powers_of_ten(num, den):
    f = EpsRatFun(num, den)
    try:
        lim = limit_at_zero(f)
    except NoLimit:
        assert f.valuation() < 0
        return
    errors = []
    for k in range(3, 9):
        x = Fraction(1, 10**k)
        if f.den(x) != 0:
            errors.append(abs(f(x) - lim))
    # eventually monotone decrease to zero
    assert errors[-1] <= errors[-2] or errors[-1] == 0
    assert errors[-1] < Fraction(1, 10**2)


@given(nonzero_polys, nonzero_polys, nonzero_polys)
def test_ratfun_field_identities(a, b, c):
    f, g = EpsRatFun(a, b), EpsRatFun(c, a)
    assert f * g == EpsRatFun(c, b)
    assert (f + g) - g == f
    assert f / f == 1


# matrices

def test_rref_examples():
    r = rref(Mat.identity(3))
    assert r.rank == 3 and r.kernel == ()
    r = rref(Mat.zeros(3))
    assert r.rank == 0 and len(r.kernel) == 3
    assert sorted(r.kernel) == sorted(tuple(Fraction(int(i == j)) for i in range(3)) for j in range(3))
    r = rref(Mat.jordan0(3))
    assert r.rank == 2
    assert r.kernel == ((1, 0, 0),)


@given(square(3))
def test_rank_nullity_and_kernel(m):
    ker = kernel(m)
    assert rank(m) + len(ker) == 3
    for v in ker:
        assert all(x == 0 for x in m @ v)


def test_mat_inverse_eps_examples():
    u = EpsMatrix([[EPS, 0, 0], [0, EPS, 0], [0, 0, 1]])
    assert mat_inverse_eps(u) == EpsMatrix([[1 / EPS, 0, 0], [0, 1 / EPS, 0], [0, 0, 1]])
    j = jordan_eps(2)
    assert j == EpsMatrix([[EPS, 1], [0, EPS]])
    assert mat_inverse_eps(j) == EpsMatrix([[1 / EPS, -1 / (EPS * EPS)], [0, 1 / EPS]])
    assert mat_inverse_eps(EpsMatrix.identity(3)) == EpsMatrix.identity(3)
    with pytest.raises(IdenticallySingular):
        mat_inverse_eps(EpsMatrix.linear(Mat.jordan0(2), Mat.jordan0(2)))


@settings(max_examples=40, deadline=None)
@given(square(3), square(3))
def test_inverse_times_u_is_identity(b, a):
    u = EpsMatrix.linear(b, a)
    if u.det() == 0:
        return
    assert mat_inverse_eps(u) @ u == EpsMatrix.identity(3)
    assert u @ mat_inverse_eps(u) == EpsMatrix.identity(3)


def test_linear_parts_round_trip():
    b, a = Mat([[1, 2], [0, 3]]), Mat([[0, 1], [1, 0]])
    u = EpsMatrix.linear(b, a)
    assert u.is_linear() and u.linear_parts() == (b, a)
    assert u.at(1) == b + a
    assert not (u @ u).is_linear()


# Jordan and Fitting

def test_nilpotent_jordan_examples():
    assert nilpotent_jordan(Mat.zeros(3)) == ((1, 1, 1), Mat.identity(3))
    assert nilpotent_jordan(Mat.jordan0(3)) == ((3,), Mat.identity(3))
    parts, _ = nilpotent_jordan(Mat([[0, 0, 1], [0, 0, 0], [0, 0, 0]]))
    assert parts == (2, 1)
    with pytest.raises(NotNilpotent):
        nilpotent_jordan(Mat.identity(2))


def _random_nilpotent(parts, g):
    j = direct_sum(*[Mat.jordan0(p) for p in parts])
    return g @ j @ g.inverse()


@st.composite
def nilpotent_case(draw):
    n = draw(st.integers(1, 5))
    parts, left = [], n
    while left:
        p = draw(st.integers(1, left))
        parts.append(p)
        left -= p
    g = draw(square(n, st.integers(-2, 2)).filter(lambda m: m.det() != 0))
    return tuple(sorted(parts, reverse=True)), _random_nilpotent(parts, g)


@settings(max_examples=60, deadline=None)
@given(nilpotent_case())
def test_nilpotent_jordan_invariants(case):
    expected, w = case
    parts, p = nilpotent_jordan(w)
    n = w.n
    assert parts == expected and sum(parts) == n
    assert p.is_invertible()
    assert p.inverse() @ w @ p == direct_sum(*[Mat.jordan0(k) for k in parts])
    ranks = rank_sequence(w)
    for m in range(1, max(parts) + 1):
        assert sum(1 for k in parts if k >= m) == ranks[m - 1] - ranks[m]


def test_fitting_examples():
    fs = fitting_split(Mat([[2, 1], [0, 3]]))
    assert fs.n0 == 2 and fs.null_basis == ()
    fs = fitting_split(Mat.jordan0(3))
    assert fs.n0 == 0 and fs.w0 == Mat.jordan0(3)
    fs = fitting_split(Mat.diag([2, 0, 0]))
    assert len(fs.one_basis) == 1 and fs.one_basis[0][1:] == (0, 0) and fs.w1 == Mat([[2]])
    assert len(fs.null_basis) == 2 and fs.w0.is_zero()


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_fitting_invariants(m):
    fs = fitting_split(m)
    k = len(fs.null_basis)
    assert fs.n0 + k == 4
    if k:
        assert (fs.w0 ** k).is_zero()
    if fs.n0:
        assert fs.w1.det() != 0
    p = fs.change_of_basis
    assert p.is_invertible()
    assert p.inverse() @ m @ p == direct_sum(*[b for b in (fs.w1, fs.w0) if b.shape[0]])
    pn = fs.projector_null()
    assert pn + fs.projector_one() == Mat.identity(4)
    assert pn @ pn == pn and pn @ m == m @ pn


# Sturm

@st.composite
def split_poly(draw):
    roots = draw(st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=4), min_size=0, max_size=4))
    extra = draw(st.booleans())
    p = EpsPoly([draw(st.integers(1, 3))])
    for r in roots:
        p = p * EpsPoly([-r, 1])
    if extra:
        p = p * EpsPoly([1, 0, 1])  # no real roots
    return p, set(roots)


@settings(max_examples=80, deadline=None)
@given(split_poly(), st.fractions(min_value=-2, max_value=1, max_denominator=4))
def test_sturm_counts_match_known_roots(case, lo):
    p, roots = case
    hi = lo + 1
    assert count_roots(p, lo, hi) == sum(1 for r in roots if lo < r <= hi)


def test_sturm_examples():
    p = EpsPoly([0, -1, 1])  # eps (eps - 1)
    assert count_roots(p, 0, 1) == 1
    assert count_roots(EpsPoly([1, 0, 1]), -10, 10) == 0
    assert count_roots(EpsPoly([1, -2, 1]), 0, 1) == 1
