import math
import pickle

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from xell.ratpoly import Poly, Q, factorial, pochhammer, sturm_chain, sturm_count_roots, symbol

x = symbol("x")

rationals = st.builds(lambda p, q: mpq(p, q), st.integers(-20, 20), st.integers(1, 9))
polys = st.lists(rationals, max_size=7).map(lambda cs: Poly(cs, "x"))
alpha_polys = st.lists(rationals, max_size=4).map(lambda cs: Poly(cs, "alpha"))
bivariate = st.lists(alpha_polys, max_size=4).map(lambda cs: Poly(cs, "x"))


# ---- worked examples ------------------------------------------------------
def test_add_examples():
    assert (x + 1) + (-x) == Poly([1])
    p = 3 * x**2 - x
    assert p + Poly([]) == p
    z = (x**2 - 1) + (1 - x**2)
    assert z.is_zero
    assert z.degree == -math.inf


def test_mul_examples():
    assert (x + 1) * (x - 1) == x**2 - 1
    p = x**3 / 7 + 2
    assert p * 1 == p
    assert (Q(1, 2) * x + Q(1, 3)) * (3 * x) == Poly([0, 1, Q(3, 2)])


def test_derivative_examples():
    assert (x**3).derivative() == 3 * x**2
    assert Poly([Q(5, 3)]).derivative().is_zero
    l2 = 1 - 2 * x + x**2 / 2
    assert l2.derivative() == -(2 - x)


def test_compose_affine_examples():
    assert (x**2).compose_affine(-1, 0) == x**2
    assert x.compose_affine(1, 1) == x + 1


def test_evaluate_examples():
    assert (x**2 - 1)(2) == 3
    assert Poly([])(Q(7, 3)) == 0
    l1 = Poly([1 + Q(3, 2), -1])
    assert l1(Q(1, 2)) == 2


def test_pochhammer_examples():
    assert pochhammer(Q(17, 3), 0) == 1
    assert pochhammer(-2, 3) == 0
    assert pochhammer(Q(1, 2), 2) == Q(3, 4)
    a = symbol("alpha")
    assert pochhammer(a, 2) == a * a + a
    with pytest.raises(ValueError):
        pochhammer(1, -1)


def test_sturm_examples():
    assert sturm_count_roots(x**2 - 1, 0, math.inf) == 1
    assert sturm_count_roots(x**2 + 1) == 0
    # P_2^(-1/2,-1/2) is proportional to the Chebyshev polynomial 2x^2 - 1
    from xell.classical import jacobi

    assert sturm_count_roots(jacobi(2, Q(-1, 2), Q(-1, 2)), -1, 1) == 2


# ---- structure -----------------------------------------------------------
def test_canonical_form_and_degree():
    p = Poly([1, 2, 0, 0])
    assert p.coeffs == (mpq(1), mpq(2))
    assert p.degree == 1
    assert Poly([0, 0]).degree == -math.inf
    assert not Poly([])


def test_nested_collapse_of_constant_inner():
    a = symbol("alpha")
    p = Poly([a - a + 3, a], "x")
    assert p[0] == 3 and not isinstance(p[0], Poly)


def test_variable_rank_and_mismatch():
    a, b = symbol("alpha"), symbol("beta")
    ab = a * b
    assert ab.var == "alpha" and ab[1].var == "beta"
    assert (a + b) - b == a
    with pytest.raises(ValueError):
        symbol("g") + symbol("alpha")


def test_immutability_and_pickling():
    p = x**2 + 1
    with pytest.raises(AttributeError):
        p.coeffs = ()
    assert pickle.loads(pickle.dumps(p)) == p
    assert hash(p) == hash(Poly([1, 0, 1]))


def test_division():
    q, r = divmod(x**3 + 2 * x + 5, x - 1)
    assert q * (x - 1) + r == x**3 + 2 * x + 5
    assert r.degree < 1
    assert (x**2 - 1).exact_div(x + 1) == x - 1
    with pytest.raises(ArithmeticError):
        (x**2 + 1).exact_div(x + 1)
    with pytest.raises(ZeroDivisionError):
        divmod(x, Poly([]))


def test_str_is_readable():
    assert str(Poly([1, 0, -2])) == "1 - 2*x^2"
    assert str(Poly([])) == "0"


def test_float_evaluation_matches_exact():
    p = Poly([Q(1, 3), -2, Q(5, 7), 1])
    xs = np.linspace(-2, 2, 11)
    exact = [float(p(mpq(v))) for v in xs]
    assert np.allclose(p(xs), exact, rtol=1e-14, atol=1e-14)


def test_subs_symbol():
    a = symbol("alpha")
    p = (a + 1) * x - a
    assert p.subs("alpha", Q(1, 2)) == Q(3, 2) * x - Q(1, 2)


def test_primitive():
    p = Poly([Q(1, 2), Q(-3, 4)])
    pp = p.primitive()
    assert pp == Poly([2, -3])
    assert (-p).primitive() == -pp


def test_factorial():
    assert factorial(5) == 120


# ---- ring laws --------------------------------------------------------------
@given(polys, polys, polys)
def test_ring_laws_univariate(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == Poly([])


@given(bivariate, bivariate, bivariate)
def test_ring_laws_bivariate(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q - q * p == Poly([])


@given(polys, polys)
def test_product_rule(p, q):
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


@given(polys, rationals.filter(bool), rationals)
def test_affine_involution(p, s, o):
    # x -> s x + o, then x -> (x - o)/s, is the identity
    assert p.compose_affine(s, o).compose_affine(1 / s, -o / s) == p


@given(polys, polys.filter(bool))
def test_divmod_reconstructs(p, d):
    q, r = divmod(p, d)
    assert q * d + r == p
    assert r.degree < d.degree


@given(polys, rationals)
def test_evaluation_is_a_ring_homomorphism(p, v):
    q = p * p + 3 * p
    assert q(v) == p(v) * p(v) + 3 * p(v)


# ---- Sturm against an independent oracle ----------------------------------
@given(
    st.lists(st.builds(lambda p, q: mpq(p, q), st.integers(-30, 30), st.integers(1, 5)), min_size=1, max_size=6),
    st.integers(0, 3),
    st.builds(lambda p, q: mpq(p, q), st.integers(-40, 0), st.integers(1, 7)),
    st.builds(lambda p, q: mpq(p, q), st.integers(1, 40), st.integers(1, 7)),
)
def test_sturm_counts_known_roots(roots, n_complex, lo, hi):
    p = Poly([1])
    for r in roots:
        p = p * (x - r)
    for k in range(n_complex):
        p = p * (x * x + (k + 1))  # no real roots
    expected = len({r for r in roots if lo < r < hi})
    assert sturm_count_roots(p, lo, hi) == expected
    assert sturm_count_roots(p) == len(set(roots))


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=8).filter(lambda c: c[-1] != 0))
def test_sturm_agrees_with_numpy_roots(cs):
    p = Poly(cs)
    roots = np.roots(cs[::-1])
    real = roots[np.abs(roots.imag) < 1e-7].real
    # only compare when numpy's roots are clearly separated and simple
    srt = np.sort(real)
    if len(srt) > 1 and np.min(np.diff(srt)) < 1e-3:
        return
    if np.any(np.abs(np.polyval(np.polyder(cs[::-1]), real)) < 1e-6):
        return
    assert sturm_count_roots(p) == len(real)


def test_sturm_chain_requires_rational():
    with pytest.raises(TypeError):
        sturm_chain(Poly([symbol("alpha"), 1]))
    with pytest.raises(ValueError):
        sturm_count_roots(Poly([]))


def test_sturm_endpoint_roots_excluded():
    p = x * (x - 1) * (x - Q(1, 2))
    assert sturm_count_roots(p, 0, 1) == 1
    assert sturm_count_roots(p, -1, 2) == 3
    assert sturm_count_roots((x - 1) ** 3, 0, 2) == 1
