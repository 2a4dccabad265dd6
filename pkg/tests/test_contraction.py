import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import algebra_pool, rand_invertible, rand_matrix, random_lie, saletan_instances
from saletan import atlas
from saletan.contraction import (
    ConditionViolated,
    ContractionNoLimit,
    ContractionSpec,
    FactorMismatch,
    InvalidLambda,
    NoFiniteLimit,
    audit,
    contracted_bracket,
    factor_out,
    iterate,
    limit_oracle,
    nonsingular_on_unit_interval,
    reparametrize,
    saletan_condition,
    saletan_spec,
)
from saletan.exactcore import EPS, EpsMatrix, IdenticallySingular, Mat, jordan_eps
from saletan.liealg import AlgebraLabel, StructureTensor, identify3, transform
from saletan.sig0n import ad3, build_algebra

SO3 = atlas.load("so3")
E2_ALG = StructureTensor.from_brackets(3, {(1, 3): {2: -1}, (2, 3): {1: 1}})
SL2_SIG0N = build_algebra(ad3(a21=-2, a32=-1))
J3 = Mat.jordan0(3)
seeds = st.integers(0, 2**32 - 1)


def diag_eps_eps_one():
    return EpsMatrix([[EPS, 0, 0], [0, EPS, 0], [0, 0, 1]])


# limit oracle

def test_oracle_so3_to_e2():
    res = limit_oracle(ContractionSpec(SO3, diag_eps_eps_one()))
    assert res.exists and res.limit == E2_ALG
    assert not res.violations


def test_oracle_identity_is_improper():
    for c in algebra_pool(3) + algebra_pool(4):
        res = limit_oracle(ContractionSpec(c, EpsMatrix.identity(c.n)))
        assert res.exists and res.limit == c


def test_oracle_so3_jordan_has_poles():
    res = limit_oracle(ContractionSpec(SO3, jordan_eps(3)))
    assert not res.exists and res.limit is None
    assert (1, 2, 1) in res.poles and res.valuations[(1, 2, 1)] < 0
    with pytest.raises(ContractionNoLimit):
        res.tensor()


def test_oracle_deformed_entries_are_exact():
    res = limit_oracle(ContractionSpec(SO3, diag_eps_eps_one()))
    # [e1,e2] = eps^2 e3 in the deformed basis
    assert res.deformed_entry(1, 2, 3) == EPS * EPS
    assert res.deformed_entry(2, 1, 3) == -EPS * EPS
    assert res.deformed_entry(1, 3, 2) == -1


def test_spec_rejects_singular_matrix():
    with pytest.raises(IdenticallySingular):
        ContractionSpec(SO3, EpsMatrix.linear(J3, J3))
    with pytest.raises(ValueError):
        ContractionSpec(SO3, EpsMatrix.identity(2))


def test_oracle_accepts_nonlinear_matrices():
    # generalized diagonal eps powers on the Heisenberg algebra
    heis = atlas.load("heisenberg")
    u = EpsMatrix([[EPS * EPS, 0, 0], [0, EPS, 0], [0, 0, EPS]])
    res = limit_oracle(ContractionSpec(heis, u))
    assert res.exists and res.limit == heis


def test_sturm_check():
    assert nonsingular_on_unit_interval(diag_eps_eps_one())
    assert not nonsingular_on_unit_interval(EpsMatrix([[EPS - Fraction(1, 2)]]))
    assert nonsingular_on_unit_interval(EpsMatrix([[EPS - 2]]))


# Saletan condition and closed form

def test_saletan_condition_examples():
    assert saletan_condition(SO3, Mat.diag([0, 0, 1])) == []
    res = saletan_condition(SO3, J3)
    assert res and res[0][:2] == (1, 2) and any(res[0][2])
    for c in algebra_pool(3):
        assert saletan_condition(c, Mat.zeros(3)) == []


def test_contracted_bracket_examples():
    assert contracted_bracket(SO3, Mat.diag([0, 0, 1])) == E2_ALG
    for c in algebra_pool(3):
        assert contracted_bracket(c, Mat.identity(3)) == c
        assert contracted_bracket(c, Mat.zeros(3)).is_abelian()
    expected = StructureTensor.from_brackets(3, {(3, 1): {1: 1}, (3, 2): {2: -1}})
    assert contracted_bracket(SL2_SIG0N, J3) == expected
    assert identify3(expected) == AlgebraLabel("g3.4", Fraction(0))
    with pytest.raises(ConditionViolated) as info:
        contracted_bracket(SO3, J3)
    assert info.value.residuals


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_condition_iff_oracle_limit_exists(seed):
    rng = random.Random(seed)
    n = rng.choice((2, 3, 4))
    c = random_lie(rng, n)
    u0 = rand_matrix(rng, n, 0.7)
    res = limit_oracle(saletan_spec(c, u0))
    holds = not saletan_condition(c, u0)
    assert holds == res.exists
    if holds:
        assert res.limit == contracted_bracket(c, u0)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_closed_form_equals_oracle_and_passes_audit(seed):
    rng = random.Random(seed)
    for c, u0 in saletan_instances(rng, 3):
        res = limit_oracle(saletan_spec(c, u0))
        assert res.exists
        lim = contracted_bracket(c, u0)
        assert res.limit == lim
        assert audit(c, lim).ok


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_condition_is_basis_equivariant(seed):
    rng = random.Random(seed)
    c = random_lie(rng, 3)
    u0 = rand_matrix(rng, 3, 0.6)
    g = rand_invertible(rng, 3)
    holds = not saletan_condition(c, u0)
    assert holds == (not saletan_condition(transform(c, g), g.inverse() @ u0 @ g))


# reparametrize and factor_out

def test_reparametrize_examples():
    spec = ContractionSpec(SO3, diag_eps_eps_one())
    assert reparametrize(spec, 0) == spec
    shifted = reparametrize(spec, 1)
    assert shifted.u == EpsMatrix([[EPS, 0, 0], [0, EPS, 0], [0, 0, 1 + EPS]])
    assert limit_oracle(shifted).limit == E2_ALG
    spec = saletan_spec(SL2_SIG0N, J3)
    half = reparametrize(spec, Fraction(1, 2))
    assert half.u == EpsMatrix.linear(J3, Mat.identity(3) + Fraction(1, 2) * J3)
    assert limit_oracle(half).limit == limit_oracle(spec).limit
    with pytest.raises(InvalidLambda):
        reparametrize(spec, -1)


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([Fraction(-1, 2), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(7, 3)]))
def test_reparametrize_never_changes_limit(seed, lam):
    rng = random.Random(seed)
    c, u0 = saletan_instances(rng, 1)[0]
    a = rand_invertible(rng, c.n)
    spec = ContractionSpec.linear(transform(c, a.inverse()), a @ u0, a)
    base = limit_oracle(spec)
    assert base.exists
    assert limit_oracle(reparametrize(spec, lam)).limit == base.limit


def test_factor_out_examples():
    spec = saletan_spec(SL2_SIG0N, J3)
    assert factor_out(spec, EpsMatrix.identity(3)) == spec
    check = EpsMatrix([[1 + EPS, 0, 0], [0, 1, 0], [0, 0, 1]])
    hat = spec.u
    full = ContractionSpec(SL2_SIG0N, hat @ check)
    reduced = factor_out(full, check, hat)
    assert reduced.u == EpsMatrix.linear(J3, Mat.identity(3))
    assert limit_oracle(full).limit == limit_oracle(reduced).limit
    with pytest.raises(FactorMismatch):
        factor_out(full, check, EpsMatrix.identity(3))
    with pytest.raises(NoFiniteLimit):
        factor_out(full, EpsMatrix([[1 / EPS, 0, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(NoFiniteLimit):
        factor_out(full, EpsMatrix([[EPS, 0, 0], [0, 1, 0], [0, 0, 1]]))


def test_factor_out_scalar_one_minus_eps():
    # u = (1 - eps) (B + eps/(1 - eps) A): the scalar factor can be dropped
    b, a = Mat.diag([0, 0, 1]), Mat.diag([1, 1, 0])
    inner = EpsMatrix.linear(b, Mat.zeros(3)) + EpsMatrix.constant(a).scale(EPS / (1 - EPS))
    scalar = EpsMatrix.identity(3).scale(1 - EPS)
    spec = ContractionSpec(SO3, inner @ scalar)
    assert spec.u == EpsMatrix.linear(b, a - b)
    reduced = factor_out(spec, scalar)
    assert limit_oracle(reduced).limit == limit_oracle(spec).limit == E2_ALG


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_factor_out_never_changes_limit(seed):
    rng = random.Random(seed)
    c, u0 = saletan_instances(rng, 1)[0]
    n = c.n
    diag = [1 + rng.choice([1, 2, -Fraction(1, 2)]) * EPS] + [1] * (n - 1)
    check = EpsMatrix([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])
    spec = ContractionSpec(c, EpsMatrix.linear(u0, Mat.identity(n)) @ check)
    base = limit_oracle(spec)
    assert base.exists
    assert limit_oracle(factor_out(spec, check)).limit == base.limit


# iteration

def test_iterate_sl2_reaches_abelian():
    chain = iterate(SL2_SIG0N, J3, 3)
    labels = [identify3(c) for c in chain]
    assert labels == [AlgebraLabel("g3.4", Fraction(0)), AlgebraLabel("g3.1"), AlgebraLabel("3g1")]


def test_iterate_abelian_and_fixed_point():
    assert all(c.is_abelian() for c in iterate(StructureTensor.zero(3), J3, 4))
    g33 = build_algebra(ad3(a31=-1))
    [once] = iterate(g33, J3, 1)
    assert identify3(once) == identify3(g33) == AlgebraLabel("g3.3")


def test_iterate_reports_failing_step():
    with pytest.raises(ConditionViolated) as info:
        iterate(SO3, J3, 2)
    assert info.value.step == 1


def test_audit_flags():
    rep = audit(SO3, E2_ALG)
    assert rep.ok
    bad = audit(StructureTensor.zero(3), SO3)
    assert not bad.derived_nonincreasing and not bad.ok
