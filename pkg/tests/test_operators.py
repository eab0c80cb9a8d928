import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ladderpt.exceptions import BasisMismatch, IndexOutOfRange
from ladderpt.operators import (
    BandOperator, BasisSpec, LadderExpr, add, adjoint, apply, basis_ket, build_monomial,
    commutator, compile_expr, expectation, multiply, scale, split, subtract,
)
from ladderpt.oracle import dense_ladders, densify

from conftest import random_band_operator, random_monotone_basis

SQ2, SQ3 = np.sqrt(2.0), np.sqrt(3.0)


def dense_monomial(basis, m, n):
    up, down = dense_ladders(basis)
    return np.linalg.matrix_power(up, m) @ np.linalg.matrix_power(down, n)


# --- basis -------------------------------------------------------------------

def test_basis_appends_boundary_coefficient():
    b = BasisSpec([0.5, 1.5, 2.5], [1.0, 2.0])
    assert b.c[-1] == 0
    assert b.dim == 3


def test_basis_rejects_nonzero_top_coefficient():
    with pytest.raises(ValueError, match="top ladder"):
        BasisSpec([0, 1, 2], [1, 1, 1])


@pytest.mark.parametrize("eps0, monotone", [
    ([0, 1, 2], True),
    ([0, 0, 1], False),
    ([0, 2, 1], False),
])
def test_strictly_monotone_flag(eps0, monotone):
    assert BasisSpec(eps0, [1, 1]).strictly_monotone is monotone


def test_degenerate_groups():
    b = BasisSpec([0, 0, 1, 2], [1, 1, 1])
    assert b.degenerate_groups() == [[0, 1], [2], [3]]


def test_basis_rejects_bad_trust():
    with pytest.raises(ValueError):
        BasisSpec([0, 1, 2], [1, 1], trust=4)


# --- build_monomial ----------------------------------------------------------

def test_monomial_identity(boson4):
    op = build_monomial(boson4, 0, 0)
    assert op.shifts == (0,)
    np.testing.assert_array_equal(op.band(0), np.ones(4))


def test_monomial_raising(boson4):
    op = build_monomial(boson4, 1, 0)
    assert op.shifts == (1,)
    np.testing.assert_allclose(op.band(1), [1, SQ2, SQ3], rtol=0, atol=1e-15)
    np.testing.assert_allclose(densify(op), dense_monomial(boson4, 1, 0), atol=1e-15)


def test_monomial_number_operator(boson4):
    op = build_monomial(boson4, 1, 1)
    assert op.shifts == (0,)
    np.testing.assert_allclose(op.band(0), [0, 1, 2, 3], atol=1e-14)
    np.testing.assert_allclose(densify(op), dense_monomial(boson4, 1, 1), atol=1e-14)


def test_monomial_out_of_range_is_zero(boson4):
    assert build_monomial(boson4, 4, 0).is_zero()
    assert build_monomial(boson4, 0, 5).is_zero()


@pytest.mark.parametrize("m", range(4))
@pytest.mark.parametrize("n", range(4))
def test_monomial_matches_dense_on_complex_basis(rng, m, n):
    basis = random_monotone_basis(rng, 7)
    np.testing.assert_allclose(densify(build_monomial(basis, m, n)), dense_monomial(basis, m, n), atol=1e-12)


def test_boundary_annihilates_top(rng):
    for dim in (2, 5, 11):
        basis = random_monotone_basis(rng, dim)
        out = apply(build_monomial(basis, 1, 0), basis_ket(basis, dim - 1))
        assert np.all(out == 0)


# --- compile -----------------------------------------------------------------

def test_compile_empty(boson4):
    assert compile_expr(boson4, LadderExpr()).is_zero()


def test_compile_position_like(boson4):
    op = compile_expr(boson4, LadderExpr(((1, 1, 0), (1, 0, 1))))
    assert op.shifts == (-1, 1)
    np.testing.assert_allclose(op.band(1), [1, SQ2, SQ3], atol=1e-15)
    np.testing.assert_allclose(op.band(-1), [1, SQ2, SQ3], atol=1e-15)


def test_compile_merges_duplicates(boson4):
    op = compile_expr(boson4, LadderExpr(((2, 1, 1), (-1, 1, 1))))
    assert op == build_monomial(boson4, 1, 1)


def test_compile_cancelling_terms_yield_zero(boson4):
    assert compile_expr(boson4, LadderExpr(((1, 2, 0), (-1, 2, 0)))).is_zero()


def test_ladder_expr_rejects_negative_power():
    with pytest.raises(ValueError):
        LadderExpr(((1.0, -1, 0),))


terms = st.lists(
    st.tuples(
        st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
        st.integers(0, 4),
        st.integers(0, 4),
    ),
    max_size=8,
)


@settings(max_examples=60, deadline=None)
@given(terms=terms, dim=st.integers(2, 12), seed=st.integers(0, 2**32 - 1))
def test_compile_matches_dense(terms, dim, seed):
    basis = random_monotone_basis(np.random.default_rng(seed), dim)
    expr = LadderExpr(tuple(terms))
    expected = sum((c * dense_monomial(basis, m, n) for c, m, n in expr.terms), np.zeros((dim, dim), complex))
    got = densify(compile_expr(basis, expr))
    scale_ = max(1.0, np.max(np.abs(expected)))
    np.testing.assert_allclose(got, expected, rtol=0, atol=1e-12 * scale_)


# --- linear structure --------------------------------------------------------

def test_add_zero(boson4):
    a = build_monomial(boson4, 2, 1)
    assert add(a, boson4.zero()) == a


def test_scale_zero(boson4):
    assert scale(0, build_monomial(boson4, 1, 0)).is_zero()


def test_subtract_self(boson4, rng):
    a = random_band_operator(rng, boson4, max_shift=3)
    assert subtract(a, a).is_zero()


def test_basis_mismatch(boson4):
    other = BasisSpec.harmonic(5)
    with pytest.raises(BasisMismatch):
        add(boson4.identity(), other.identity())
    with pytest.raises(BasisMismatch):
        multiply(boson4.identity(), other.identity())
    with pytest.raises(BasisMismatch):
        apply(boson4.identity(), np.ones(5))


def test_operator_overloads(boson4, rng):
    a = random_band_operator(rng, boson4, 3)
    b = random_band_operator(rng, boson4, 3)
    assert a + b == add(a, b)
    assert a - b == subtract(a, b)
    assert 2 * a == scale(2, a) == a * 2
    assert a @ b == multiply(a, b)
    assert -a == scale(-1, a)


def test_band_shape_is_checked(boson4):
    with pytest.raises(ValueError):
        BandOperator(boson4, {1: [1, 2]})
    with pytest.raises(IndexOutOfRange):
        BandOperator(boson4, {4: []})


def test_operator_is_immutable(boson4):
    op = build_monomial(boson4, 1, 0)
    with pytest.raises(ValueError):
        op.band(1)[0] = 5


# --- products ----------------------------------------------------------------

def test_identity_is_neutral(boson4, rng):
    a = random_band_operator(rng, boson4, 3)
    assert multiply(boson4.identity(), a) == a
    assert multiply(a, boson4.identity()) == a


def test_raise_lower_product(boson4):
    up, down = build_monomial(boson4, 1, 0), build_monomial(boson4, 0, 1)
    np.testing.assert_allclose(multiply(up, down).band(0), [0, 1, 2, 3], atol=1e-14)
    np.testing.assert_allclose(multiply(up, down).to_dense(), build_monomial(boson4, 1, 1).to_dense(), atol=1e-14)


def test_lower_raise_product_shows_truncation(boson4):
    up, down = build_monomial(boson4, 1, 0), build_monomial(boson4, 0, 1)
    prod = multiply(down, up)
    assert prod.shifts == (0,)
    np.testing.assert_allclose(prod.band(0), [1, 2, 3, 0], atol=1e-14)


def test_commutator_lower_raise(boson4):
    up, down = build_monomial(boson4, 1, 0), build_monomial(boson4, 0, 1)
    np.testing.assert_allclose(commutator(down, up).band(0), [1, 1, 1, -3], atol=1e-14)


def test_commutator_with_hamiltonian(boson4):
    up = build_monomial(boson4, 1, 0)
    c = commutator(boson4.hamiltonian(), up)
    np.testing.assert_allclose(c.to_dense(), up.to_dense(), atol=1e-14)


def test_commutator_self(boson4, rng):
    a = random_band_operator(rng, boson4, 3)
    assert commutator(a, a).is_zero()


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 20))
def test_product_matches_dense_and_associates(seed, dim):
    rng = np.random.default_rng(seed)
    basis = random_monotone_basis(rng, dim)
    a, b, c = (random_band_operator(rng, basis, 4) for _ in range(3))
    ab = multiply(a, b)
    np.testing.assert_allclose(densify(ab), densify(a) @ densify(b), atol=1e-12 * max(1, ab.max_abs()))
    left = multiply(ab, c).to_dense()
    right = multiply(a, multiply(b, c)).to_dense()
    assert np.linalg.norm(left - right) <= 1e-12 * max(np.linalg.norm(left), 1e-300)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_commutator_antisymmetry(seed):
    rng = np.random.default_rng(seed)
    basis = random_monotone_basis(rng, 9)
    a, b = random_band_operator(rng, basis, 4), random_band_operator(rng, basis, 4)
    lhs, rhs = commutator(a, b).to_dense(), scale(-1, commutator(b, a)).to_dense()
    assert np.max(np.abs(lhs - rhs)) <= 1e-14 * max(1.0, np.max(np.abs(lhs)))


# --- adjoint -----------------------------------------------------------------

def test_adjoint_identity(boson4):
    assert adjoint(boson4.identity()) == boson4.identity()


def test_adjoint_of_raising_is_lowering(boson4):
    assert adjoint(build_monomial(boson4, 1, 0)) == build_monomial(boson4, 0, 1)


def test_adjoint_antilinear(boson4, rng):
    a = random_band_operator(rng, boson4, 3)
    np.testing.assert_allclose(adjoint(1j * a).to_dense(), (-1j * adjoint(a)).to_dense(), atol=0)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_adjoint_involution_and_dense(seed):
    rng = np.random.default_rng(seed)
    basis = random_monotone_basis(rng, 8)
    a = random_band_operator(rng, basis, 5)
    assert adjoint(adjoint(a)) == a
    np.testing.assert_array_equal(adjoint(a).to_dense(), a.to_dense().conj().T)


# --- kets and matrix elements -----------------------------------------------

def test_apply_identity_and_zero(boson4, rng):
    ket = rng.normal(size=4) + 1j * rng.normal(size=4)
    np.testing.assert_array_equal(apply(boson4.identity(), ket), ket)
    np.testing.assert_array_equal(apply(boson4.zero(), ket), np.zeros(4))


def test_apply_raising_to_ground(boson4):
    np.testing.assert_array_equal(apply(build_monomial(boson4, 1, 0), basis_ket(boson4, 0)), basis_ket(boson4, 1))


def test_apply_matches_dense(rng):
    basis = random_monotone_basis(rng, 10)
    a = random_band_operator(rng, basis, 4)
    ket = rng.normal(size=10) + 1j * rng.normal(size=10)
    np.testing.assert_allclose(apply(a, ket), densify(a) @ ket, atol=1e-13)


def test_expectation(boson4):
    assert expectation(boson4.identity(), 3) == 1
    assert expectation(build_monomial(boson4, 1, 1), 2) == pytest.approx(2, abs=1e-14)
    assert expectation(build_monomial(boson4, 1, 0), 1) == 0
    with pytest.raises(IndexOutOfRange):
        expectation(boson4.identity(), 4)


# --- split -------------------------------------------------------------------

def test_split_number_operator(boson4):
    n = build_monomial(boson4, 1, 1)
    par, perp = split(n)
    assert par == n and perp.is_zero()


def test_split_raising(boson4):
    up = build_monomial(boson4, 1, 0)
    par, perp = split(up)
    assert par.is_zero() and perp == up


def test_split_mixed(boson4):
    a = compile_expr(boson4, LadderExpr(((1, 1, 1), (1, 2, 0))))
    par, perp = split(a)
    assert par == build_monomial(boson4, 1, 1)
    assert perp == build_monomial(boson4, 2, 0)
    assert add(par, perp) == a


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_split_reassembles(seed):
    rng = np.random.default_rng(seed)
    basis = random_monotone_basis(rng, 8)
    a = random_band_operator(rng, basis, 5)
    par, perp = split(a)
    assert add(par, perp) == a
    assert not set(par.shifts) & set(perp.shifts)


def test_from_dense_roundtrip(rng):
    basis = random_monotone_basis(rng, 6)
    a = random_band_operator(rng, basis, 5)
    assert BandOperator.from_dense(basis, a.to_dense()) == a
