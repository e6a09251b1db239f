import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from xell.classical import jacobi, laguerre
from xell.identities import (
    LIMIT_TERM_MAP,
    LemmaId,
    cubic_jacobi_residual,
    cubic_jacobi_terms,
    cubic_laguerre_residual,
    cubic_laguerre_terms,
    dpt_alpha_beta,
    jacobi_pit,
    laguerre_limit_of_jacobi_identity,
    laguerre_pit,
    lemma_residual,
    shape_invariance_residual,
    shape_invariance_terms,
    trig_hyp_reduction,
)
from xell.ratpoly import Poly, Q, symbol
from xell.systems import ConstraintError, Params, SystemKind

R, T, H = SystemKind.RADIAL, SystemKind.TRIG, SystemKind.HYP
x = symbol("x")
alpha, beta = symbol("alpha"), symbol("beta")


# ---- lemmas -----------------------------------------------------------------
def test_lemma_examples():
    assert lemma_residual("A", 0).is_zero
    assert lemma_residual(LemmaId.A, 1).is_zero
    assert lemma_residual("C", 2).is_zero


@pytest.mark.parametrize("tag", "ABCD")
def test_lemmas_symbolic_sweep(tag):
    for n in range(0, 16):
        assert lemma_residual(tag, n).is_zero, (tag, n)


@given(st.sampled_from("CD"), st.integers(0, 8),
       st.integers(-40, 40).filter(lambda p: p % 7).map(lambda p: mpq(p, 7)),
       st.integers(-40, 40).filter(lambda p: p % 3).map(lambda p: mpq(p, 3)))
def test_jacobi_lemmas_at_rational_points(tag, n, a, b):
    assert lemma_residual(tag, n, a, b).is_zero


def test_lemma_c_in_plain_variables():
    # independent of the (alpha, alpha + beta) parametrisation used internally
    for n in range(5):
        lhs = 2 * (alpha - 1) * jacobi(n, alpha - 1, beta) - (n + alpha + beta) * (1 - x) * jacobi(
            n - 1, alpha, beta + 1
        )
        assert lhs == 2 * (n + alpha - 1) * jacobi(n, alpha - 2, beta + 1)


def test_a_perturbed_lemma_fails():
    bad = x * laguerre(2, alpha + 1) - alpha * laguerre(2, alpha) + laguerre(3, alpha - 1) * 2
    assert not bad.is_zero


# ---- cubic identities -----------------------------------------------------------
def test_cubic_trivial_cases():
    assert cubic_laguerre_residual(0).is_zero
    assert cubic_jacobi_residual(0).is_zero


@pytest.mark.parametrize("ell", range(1, 7))
def test_cubic_laguerre_symbolic(ell):
    assert cubic_laguerre_residual(ell).is_zero


def test_cubic_laguerre_rational_example():
    assert cubic_laguerre_residual(5, Q(7, 3)).is_zero


@pytest.mark.parametrize("ell", range(1, 5))
def test_cubic_jacobi_symbolic(ell):
    assert cubic_jacobi_residual(ell).is_zero


@pytest.mark.parametrize("b", [Q(9, 2), Q(11, 2)])
def test_cubic_jacobi_rational_examples(b):
    assert cubic_jacobi_residual(4, Q(-13, 2), b).is_zero


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_cubic_terms_are_not_individually_zero(ell):
    terms = cubic_laguerre_terms(ell)
    assert len(terms) == 5
    assert all(not t.is_zero for t in terms)
    assert max(t.degree for t in terms) == 3 * ell
    jterms = cubic_jacobi_terms(ell)
    assert len(jterms) == 5 and all(not t.is_zero for t in jterms)


def test_cubic_residual_notices_a_dropped_term():
    terms = cubic_laguerre_terms(3)
    assert not sum(terms[1:], Poly([])).is_zero


def test_pit_grids():
    for ell in range(0, 5):
        rep = laguerre_pit(ell)
        assert rep.is_zero and rep.degree_bound == 3 * ell + 1
    for ell in range(0, 3):
        assert jacobi_pit(ell).is_zero


# ---- Jacobi -> Laguerre -------------------------------------------------------
def test_limit_map_is_a_permutation():
    assert sorted(LIMIT_TERM_MAP) == list(range(5))


def test_limit_examples():
    rep = laguerre_limit_of_jacobi_identity(1, [10**4, 2 * 10**4, 4 * 10**4])
    assert rep.gaps[0][LIMIT_TERM_MAP[0]] < 1e-2
    assert all(1.8 <= r <= 2.2 for r in rep.ratios(3))
    assert all(rep.jacobi_zero) and rep.laguerre_zero


@pytest.mark.parametrize("ell", [2, 3])
def test_limit_all_terms_first_order(ell):
    rep = laguerre_limit_of_jacobi_identity(ell, [10**4, 2 * 10**4, 4 * 10**4])
    for term in range(5):
        assert all(1.8 <= r <= 2.2 for r in rep.ratios(term)), term


def test_limit_needs_ell():
    with pytest.raises(ValueError):
        laguerre_limit_of_jacobi_identity(0, [10])


# ---- shape invariance -------------------------------------------------------------
def test_shape_examples():
    assert shape_invariance_residual(R, 1, 1).is_zero
    assert shape_invariance_residual(T, 2, (1, Q(3, 2))).is_zero
    assert shape_invariance_residual(H, 1, (1, Q(23, 2))).is_zero


@pytest.mark.parametrize("kind", [R, T, H])
@pytest.mark.parametrize("ell", range(1, 5))
def test_shape_symbolic(kind, ell):
    p = Params(symbol("g")) if kind is R else Params(symbol("g"), symbol("h"))
    rep = shape_invariance_residual(kind, ell, p)
    assert rep.is_zero
    assert rep.degree_bound == 3 * ell


def test_shape_terms_nontrivial():
    terms = shape_invariance_terms(T, 2, (1, 3))
    assert len(terms) == 7
    assert sum(1 for t in terms if not t.is_zero) >= 5


def test_shape_energy_summand_vanishes_and_others_do_not_cancel():
    for kind, p in [(R, 1), (T, (1, 3)), (H, (1, 30))]:
        terms = shape_invariance_terms(kind, 2, p)
        # E~ is unchanged by lambda -> lambda + 2 delta in all three systems
        assert terms[2].is_zero
        assert not sum(terms[1:], Poly([], "eta")).is_zero


def test_shape_rejects_bad_input():
    with pytest.raises(ValueError):
        shape_invariance_terms(R, 0, 1)
    with pytest.raises(ConstraintError):
        shape_invariance_terms(H, 3, (1, 8))


# ---- trig/hyp reduction -------------------------------------------------------------
@pytest.mark.parametrize("ell", range(1, 5))
def test_trig_hyp_reduce_to_same_identity(ell):
    a, b = dpt_alpha_beta(T, ell, Params.of(Q(3, 2), Q(17, 5)))
    trig, hyp = trig_hyp_reduction(ell, a, b)
    assert trig == hyp


def test_dpt_alpha_beta_definition():
    assert dpt_alpha_beta(T, 4, (2, 3)) == (Q(-13, 2), Q(11, 2))
    assert dpt_alpha_beta(H, 1, (1, 12)) == (Q(-5, 2), Q(-25, 2))


def test_reduction_degenerate_point():
    with pytest.raises(ConstraintError):
        trig_hyp_reduction(1, Q(-13, 2), Q(9, 2))
