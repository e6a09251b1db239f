import math

import mpmath
import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from xell.checks import sample_params
from xell.ratpoly import Poly, Q, sturm_count_roots, symbol
from xell.systems import (
    ConstraintError,
    Params,
    SystemKind,
    classical_poly,
    deformed_potential,
    delta_pointwise,
    eigenfunction_residual,
    energy_level,
    energy_level_telescoped,
    log_psi,
    make_system,
    n_bound,
    rodrigues_polynomial,
    tilde_energy,
    xell_poly,
    xi_ode_residual,
    xi_poly,
    xi_positivity_certificate,
)

R, T, H = SystemKind.RADIAL, SystemKind.TRIG, SystemKind.HYP
eta = symbol("eta")
KINDS = [R, T, H]
ADMISSIBLE = {R: Params.of(1), T: Params.of(1, 2), H: Params.of(1, 30)}


def rng_params(kind, seed, ell=0, n_max=0):
    return sample_params(kind, np.random.default_rng(seed), ell, n_max)


# ---- tables and energies -------------------------------------------------
def test_radial_tables():
    s = make_system(R, 2, 1)
    assert s.delta == (1,)
    assert s.deta_sq == 4 * eta
    assert s.dw0_eta == 2 * (1 - eta)
    assert s.tilde_E == -8
    assert s.eta_second == Poly([2], "eta")


def test_dpt_second_derivative_of_eta():
    # cos 2x'' = -4 cos 2x, cosh 2x'' = 4 cosh 2x
    assert make_system(T, 0, (1, 2)).eta_second == -4 * eta
    assert make_system(H, 0, (1, 30)).eta_second == 4 * eta


def test_bound_state_count():
    assert n_bound(1, 10) == 4
    assert n_bound(1, 11) == 4  # (h-g)/2 = 5 itself is excluded
    assert make_system(H, 1, (1, Q(23, 2))).n_B == 5


@pytest.mark.parametrize(
    "kind,params,ell,n,match",
    [
        (T, (1, Q(1, 2)), 0, None, "h > g"),
        (R, (-1,), 0, None, "g > 0"),
        (H, (1, 10), 4, None, "n_B"),
        (H, (1, 20), 2, 8, "n < "),
    ],
)
def test_constraint_errors(kind, params, ell, n, match):
    from xell.systems import _as_params, check_params

    with pytest.raises(ConstraintError, match=match):
        check_params(kind, _as_params(kind, params), ell, n)


def test_dpt_needs_h():
    with pytest.raises(ConstraintError):
        make_system(T, 0, 1)


def test_energy_examples():
    assert energy_level(R, 1, 3) == 12
    assert energy_level(T, (1, 2), 1) == 16
    assert energy_level(H, (1, 10), 2) == 56
    assert energy_level_telescoped(H, (1, 10), 2) == 32 + 24


@given(
    st.sampled_from(KINDS),
    st.integers(0, 50),
    st.builds(lambda p, q: mpq(p, q), st.integers(1, 200), st.integers(1, 9)),
    st.builds(lambda p, q: mpq(p, q), st.integers(1, 200), st.integers(1, 9)),
)
def test_energy_telescopes(kind, n, g, gap):
    params = Params(g) if kind is R else Params(g, g + gap)
    assert energy_level(kind, params, n) == energy_level_telescoped(kind, params, n)


def test_tilde_energy_trig_example():
    assert tilde_energy(T, Params.of(1, 3), 2) == energy_level(T, (-3, 4), 2)


# ---- xi_ell ----------------------------------------------------------------
def test_xi_examples():
    g, h = symbol("g"), symbol("h")
    assert xi_poly(R, 1, Params(g)) == (g + Q(1, 2)) + eta
    assert xi_poly(T, 1, Params(g, h)) == -((g + Q(1, 2)) + (h - g) * (1 - eta) / 2)
    for kind in KINDS:
        assert xi_poly(kind, 0, ADMISSIBLE[kind]) == Poly([1], "eta")
        assert xi_poly(kind, -1, ADMISSIBLE[kind]).is_zero


@given(st.integers(0, 6), st.integers(0, 10**6))
def test_hyperbolic_data_is_trig_with_h_negated(ell, seed):
    p = rng_params(T, seed)
    assert xi_poly(H, ell, p) == xi_poly(T, ell, Params(p.g, -p.h))
    assert classical_poly(H, p, ell) == classical_poly(T, Params(p.g, -p.h), ell)


def test_certificate_examples():
    c = xi_positivity_certificate(R, 2, 1)
    assert c.coefficients == (Q(35, 8), Q(7, 2), Q(1, 2))
    c = xi_positivity_certificate(T, 1, (1, 2))
    assert c.coefficients == (Q(3, 2), 1)
    assert c.sign == -1 and c.variable == "sin^2 x"
    for kind in KINDS:
        assert xi_positivity_certificate(kind, 0, ADMISSIBLE[kind]).coefficients == (1,)


@given(st.sampled_from(KINDS), st.integers(1, 6), st.integers(0, 10**6))
def test_positivity_certificates_and_no_roots(kind, ell, seed):
    p = rng_params(kind, seed, ell)
    cert = xi_positivity_certificate(kind, ell, p)
    assert all(c > 0 for c in cert.coefficients)
    lo, hi = {R: (0, math.inf), T: (-1, 1), H: (1, math.inf)}[kind]
    assert sturm_count_roots(xi_poly(kind, ell, p), lo, hi) == 0


def test_certificate_rejects_inadmissible():
    with pytest.raises(ConstraintError):
        xi_positivity_certificate(T, 1, (2, 1))


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("ell", range(0, 7))
def test_xi_ode_symbolic(kind, ell):
    p = Params(symbol("g")) if kind is R else Params(symbol("g"), symbol("h"))
    assert xi_ode_residual(kind, ell, p).is_zero


def test_xi_ode_examples():
    assert xi_ode_residual(R, 0, 1).is_zero
    assert xi_ode_residual(T, 2, (1, 3)).is_zero
    assert tilde_energy(R, Params.of(1), 1) == -4


def test_xi_ode_detects_wrong_energy():
    from xell.systems import deta_sq, dtw0_eta, eta_second

    p = Params.of(1, 3)
    xi = xi_poly(T, 2, p)
    d1 = xi.derivative()
    lhs = -(eta_second(T) * d1 + deta_sq(T) * d1.derivative()) - dtw0_eta(T, p, 2) * d1 * 2
    assert not (lhs - xi * (tilde_energy(T, p, 2) + 1)).is_zero


# ---- P_{ell,n} ---------------------------------------------------------------
def test_xell_examples():
    assert xell_poly(R, 1, 0, 1).poly == Q(5, 2) + eta
    for kind in KINDS:
        p = xell_poly(kind, 1, 0, ADMISSIBLE[kind])
        assert p.degree == 1 and p.zeros_in_domain() == 0
    p = xell_poly(T, 1, 1, (1, 2))
    assert p.degree == 2 and p.zeros_in_domain() == 1
    assert xell_poly(T, 2, 5, (1, 2)).zeros_in_domain() == 5
    p = xell_poly(R, 3, 1, 2)
    assert p.degree == 4 and p.zeros_in_domain() == 1


def test_xell_ell_zero_is_classical():
    for kind in KINDS:
        assert xell_poly(kind, 0, 3, ADMISSIBLE[kind]).poly == classical_poly(kind, ADMISSIBLE[kind], 3)


def test_xell_structural_denominator():
    with pytest.raises(ZeroDivisionError, match="-g\\+h\\+2l-2"):
        xell_poly(T, 1, 1, (1, 1))
    with pytest.raises(ValueError):
        xell_poly(R, 1, -1, 1)


@given(st.sampled_from(KINDS), st.integers(0, 3), st.integers(0, 7), st.integers(0, 10**6))
def test_oscillation_theorem(kind, ell, n, seed):
    p = rng_params(kind, seed, ell, n)
    x = xell_poly(kind, ell, n, p)
    assert x.degree == ell + n
    assert x.zeros_in_domain() == n


# ---- Rodrigues ladder -------------------------------------------------------
def _collinear(p, q):
    return (p * q.leading() - q * p.leading()).is_zero


def test_rodrigues_examples():
    for kind in KINDS:
        assert rodrigues_polynomial(kind, 0, ADMISSIBLE[kind]) == Poly([1], "eta")
    assert _collinear(rodrigues_polynomial(R, 1, 1), classical_poly(R, Params.of(1), 1))
    assert _collinear(rodrigues_polynomial(T, 2, (1, 2)), classical_poly(T, Params.of(1, 2), 2))


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("n", range(1, 6))
def test_rodrigues_collinear_symbolic(kind, n):
    p = Params(symbol("g")) if kind is R else Params(symbol("g"), symbol("h"))
    rod = rodrigues_polynomial(kind, n, p)
    assert rod.degree == n
    assert _collinear(rod, classical_poly(kind, p, n))


# ---- pointwise: independent mpmath oracle ----------------------------------
mpmath.mp.dps = 30


def _oracle(kind, ell, g, h):
    """(w_ell, psi_ell) built from mpmath's own special functions."""
    g = mpmath.mpf(int(g.numerator)) / int(g.denominator)
    h = mpmath.mpf(int(h.numerator)) / int(h.denominator) if h is not None else None

    def xi(lam_g, lam_h, z):
        if ell == 0:
            return mpmath.mpf(1)
        if kind is R:
            return mpmath.laguerre(ell, lam_g + ell - mpmath.mpf(3) / 2, -z)
        b = lam_h + ell - mpmath.mpf(3) / 2 if kind is T else -lam_h + ell - mpmath.mpf(3) / 2
        return mpmath.jacobi(ell, -lam_g - ell - mpmath.mpf(1) / 2, b, z)

    def parts(x):
        # log e^{w0(lambda + ell delta)}, eta, next parameters
        if kind is R:
            return -x * x / 2 + (g + ell) * mpmath.log(x), x * x, None
        if kind is T:
            base = (g + ell) * mpmath.log(mpmath.sin(x)) + (h + ell) * mpmath.log(mpmath.cos(x))
            return base, mpmath.cos(2 * x), h + 1
        base = (g + ell) * mpmath.log(mpmath.sinh(x)) - (h - ell) * mpmath.log(mpmath.cosh(x))
        return base, mpmath.cosh(2 * x), h - 1

    def w(x):
        base, z, hn = parts(x)
        return base + mpmath.log(abs(xi(g + 1, hn, z))) - mpmath.log(abs(xi(g, h, z)))

    def psi(x):
        base, z, _ = parts(x)
        return mpmath.exp(base) / xi(g, h, z)

    return w, psi


CASES = [
    (R, 0, Q(1), None, [0.3, 1.0, 2.5]),
    (R, 2, Q(3, 2), None, [0.3, 1.0, 2.5]),
    (T, 1, Q(1), Q(2), [0.2, 0.7, 1.3]),
    (T, 3, Q(5, 4), Q(5, 2), [0.2, 0.7, 1.3]),
    (H, 1, Q(1), Q(12), [0.2, 0.7, 1.5]),
    (H, 2, Q(3, 2), Q(25, 2), [0.2, 0.7, 1.5]),
]


@pytest.mark.parametrize("kind,ell,g,h,xs", CASES)
def test_potential_matches_mpmath_differentiation(kind, ell, g, h, xs):
    w, _ = _oracle(kind, ell, g, h)
    params = Params.of(g, h)
    ours = deformed_potential(kind, ell, params, np.array(xs))
    for x, u in zip(xs, ours):
        ref = mpmath.diff(w, x) ** 2 + mpmath.diff(w, x, 2)
        assert abs(u - float(ref)) <= 1e-9 * max(1.0, abs(float(ref)))


@pytest.mark.parametrize("kind,ell,g,h,xs", CASES)
def test_eigenfunctions_match_mpmath_differentiation(kind, ell, g, h, xs):
    w, psi = _oracle(kind, ell, g, h)
    params = Params.of(g, h)
    for n in range(3):
        poly = xell_poly(kind, ell, n, params).poly
        coeffs = [mpmath.mpf(int(c.numerator)) / int(c.denominator) for c in poly.coeffs]
        e = energy_level(kind, params.shift(kind, ell), n)
        eta_of = {R: lambda x: x * x, T: lambda x: mpmath.cos(2 * x), H: lambda x: mpmath.cosh(2 * x)}[kind]

        def phi(x):
            return psi(x) * mpmath.polyval(coeffs[::-1], eta_of(x))

        for x in xs:
            u = mpmath.diff(w, x) ** 2 + mpmath.diff(w, x, 2)
            res = -mpmath.diff(phi, x, 2) + (u - mpmath.mpf(int(e.numerator)) / int(e.denominator)) * phi(x)
            scale = max(abs(phi(x)) * (abs(u) + abs(float(e)) + 1), mpmath.mpf(1e-300))
            assert abs(res) / scale < 1e-12


def test_potential_examples():
    assert deformed_potential(R, 0, 1, 1.0) == pytest.approx(-2.0, abs=1e-15)
    xs = np.linspace(0.05, 1.5, 25)
    for kind in KINDS:
        u = deformed_potential(kind, 2, ADMISSIBLE[kind], xs)
        v = deformed_potential(kind, 2, ADMISSIBLE[kind], xs, xi_scales=(Q(7, 3), Q(7, 3)))
        assert np.array_equal(u, v)
    tail = deformed_potential(R, 1, 1, np.array([20.0, 40.0])) - np.array([400.0, 1600.0])
    assert np.all(np.abs(tail) < 10)


def test_potential_rejects_boundary_points():
    with pytest.raises(ValueError):
        deformed_potential(T, 1, (1, 2), math.pi / 2)
    with pytest.raises(ValueError):
        deformed_potential(R, 1, 1, 0.0)


def test_eigenfunction_residual_examples():
    assert eigenfunction_residual(R, 1, 0, 1, 0.9) < 1e-8
    assert eigenfunction_residual(T, 2, 3, (1, 2), 0.6) < 1e-8
    xs = np.linspace(0.1, 2.0, 7)
    assert np.max(eigenfunction_residual(R, 0, 0, 1, xs)) < 1e-14


@pytest.mark.parametrize("kind", KINDS)
def test_eigenfunction_residual_small(kind):
    xs = np.linspace(0.05, 1.5, 30)
    p = ADMISSIBLE[kind]
    for ell in range(4):
        for n in range(4):
            assert np.max(eigenfunction_residual(kind, ell, n, p, xs)) < 1e-8


def test_delta_examples():
    assert abs(delta_pointwise(R, 1, 1, 0.7)) < 1e-9
    assert abs(delta_pointwise(T, 3, (Q(5, 4), Q(5, 2)), math.pi / 5)) < 1e-9
    xs = np.linspace(0.1, 1.4, 9)
    for kind in KINDS:
        assert np.max(np.abs(delta_pointwise(kind, 0, ADMISSIBLE[kind], xs))) < 1e-10


def test_log_psi_decays():
    lp = log_psi(H, 1, (1, 12), np.array([1.0, 5.0, 10.0]))
    assert lp[0] > lp[1] > lp[2]
