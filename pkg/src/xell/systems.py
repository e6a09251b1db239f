"""The three shape-invariant systems and their X_ell deformations.

* radial oscillator:  lambda = g,      delta = 1,      eta = x^2,      0 < x < inf
* trigonometric DPT:  lambda = (g, h), delta = (1, 1),  eta = cos 2x,   0 < x < pi/2
* hyperbolic DPT:     lambda = (g, h), delta = (1, -1), eta = cosh 2x,  0 < x < inf

Everything that can be written as a polynomial in eta is built exactly;
float evaluation is used only for the transcendental pieces (w0, psi, U).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from gmpy2 import mpq

from .classical import jacobi, laguerre
from .ratpoly import Poly, factorial, pochhammer, sturm_count_roots, symbol

__all__ = [
    "SystemKind",
    "Params",
    "SystemData",
    "XellPoly",
    "Certificate",
    "ConstraintError",
    "make_system",
    "energy_level",
    "energy_level_telescoped",
    "classical_poly",
    "xi_poly",
    "xi_positivity_certificate",
    "xell_poly",
    "dw0_eta",
    "dtw0_eta",
    "deta_sq",
    "eta_second",
    "tilde_energy",
    "xi_ode_residual",
    "rodrigues_polynomial",
    "eta_of_x",
    "domain",
    "eta_domain",
    "n_bound",
    "deformed_potential",
    "delta_pointwise",
    "eigenfunction_residual",
    "log_psi",
]

ETA = "eta"
HALF = mpq(1, 2)


class ConstraintError(ValueError):
    """Parameters outside the admissible region of a system."""


class SystemKind(enum.Enum):
    RADIAL = "radial"
    TRIG = "trig-dpt"
    HYP = "hyp-dpt"

    @classmethod
    def parse(cls, name) -> "SystemKind":
        if isinstance(name, cls):
            return name
        aliases = {"radial-oscillator": "radial", "trig": "trig-dpt", "hyp": "hyp-dpt"}
        return cls(aliases.get(name, name))


@dataclass(frozen=True)
class Params:
    """lambda = g (radial) or (g, h).  Entries are rationals or symbols."""

    g: object
    h: object = None

    @classmethod
    def of(cls, g, h=None) -> "Params":
        conv = lambda v: v if v is None or isinstance(v, Poly) else mpq(v)
        return cls(conv(g), conv(h))

    def shift(self, kind: SystemKind, k: int = 1) -> "Params":
        """lambda + k*delta."""
        if kind is SystemKind.RADIAL:
            return Params(self.g + k, None)
        sh = k if kind is SystemKind.TRIG else -k
        return Params(self.g + k, self.h + sh)

    @property
    def symbolic(self) -> bool:
        return isinstance(self.g, Poly) or isinstance(self.h, Poly)


def _as_params(kind: SystemKind, params) -> Params:
    if isinstance(params, Params):
        p = params
    elif isinstance(params, (tuple, list)):
        p = Params.of(*params)
    else:
        p = Params.of(params)
    if kind is not SystemKind.RADIAL and p.h is None:
        raise ConstraintError(f"{kind.value} needs both g and h")
    if kind is SystemKind.RADIAL and p.h is not None:
        p = Params(p.g, None)
    return p


def n_bound(g, h) -> int:
    """Number of hyperbolic bound states: greatest integer strictly below (h-g)/2."""
    v = (mpq(h) - mpq(g)) / 2
    return int(math.ceil(v)) - 1


def check_params(kind: SystemKind, params: Params, ell: int = 0, n: int | None = None):
    """Raise ConstraintError naming the violated inequality."""
    if params.symbolic:
        return
    g, h = params.g, params.h
    if not g > 0:
        raise ConstraintError(f"g > 0 violated (g={g})")
    if kind is SystemKind.RADIAL:
        return
    if not h > g:
        raise ConstraintError(f"h > g violated (g={g}, h={h})")
    if kind is SystemKind.HYP:
        nb = n_bound(g, h)
        if not ell < nb:
            raise ConstraintError(f"ell < n_B violated (ell={ell}, n_B={nb})")
        if n is not None and not n < (h - g) / 2 - ell:
            raise ConstraintError(
                f"n < (h-g)/2 - ell violated (n={n}, (h-g)/2-ell={(h - g) / 2 - ell})"
            )


# ------------------------------------------------------------ eta tables
def _eta(coeffs) -> Poly:
    return Poly(coeffs, ETA)


def dw0_eta(kind: SystemKind, params: Params) -> Poly:
    """d_x eta * d_x w0(x; lambda) as a polynomial in eta."""
    g, h = params.g, params.h
    if kind is SystemKind.RADIAL:
        return _eta([2 * g, -2])
    if kind is SystemKind.TRIG:
        return _eta([-2 * (g - h), -2 * (g + h)])
    return _eta([2 * (g + h), 2 * (g - h)])


def _twisted(kind: SystemKind, params: Params, ell: int) -> Params:
    # parameters of w~0 and E~ for the DPT cases
    if kind is SystemKind.TRIG:
        return Params(-params.g - ell, params.h + ell - 1)
    return Params(-params.g - ell, params.h - ell + 1)


def dtw0_eta(kind: SystemKind, params: Params, ell: int) -> Poly:
    """d_x eta * d_x w~0(x; lambda, ell) as a polynomial in eta."""
    if kind is SystemKind.RADIAL:
        return _eta([2 * (params.g + ell - 1), 2])
    return dw0_eta(kind, _twisted(kind, params, ell))


def deta_sq(kind: SystemKind) -> Poly:
    """(d_x eta)^2 as a polynomial in eta."""
    if kind is SystemKind.RADIAL:
        return _eta([0, 4])
    if kind is SystemKind.TRIG:
        return _eta([4, 0, -4])
    return _eta([-4, 0, 4])


def eta_second(kind: SystemKind) -> Poly:
    """d_x^2 eta in terms of eta.

    Derived, not tabulated: differentiating (eta')^2 = S(eta) gives
    2 eta' eta'' = S'(eta) eta', hence eta'' = S'(eta)/2.
    """
    return deta_sq(kind).derivative() / 2


def energy_level(kind, params, n: int):
    """Closed-form E_n(lambda)."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    if n < 0:
        raise ValueError("n must be >= 0")
    g, h = params.g, params.h
    if kind is SystemKind.RADIAL:
        return mpq(4 * n)
    if kind is SystemKind.TRIG:
        return 4 * n * (g + h + n)
    return 4 * n * (h - g - n)


def energy_level_telescoped(kind, params, n: int):
    """sum_{k<n} E_1(lambda + k delta)."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    total = mpq(0)
    for k in range(n):
        total = total + energy_level(kind, params.shift(kind, k), 1)
    return total


def tilde_energy(kind: SystemKind, params: Params, ell: int):
    if kind is SystemKind.RADIAL:
        return mpq(-4 * ell)
    return energy_level(kind, _twisted(kind, params, ell), ell)


# ------------------------------------------------------------ polynomials
def classical_poly(kind, params, n: int, var: str = ETA) -> Poly:
    """P_n(eta; lambda): the undeformed polynomial eigenfunction."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    g, h = params.g, params.h
    if kind is SystemKind.RADIAL:
        return laguerre(n, g - HALF, var)
    if kind is SystemKind.TRIG:
        return jacobi(n, g - HALF, h - HALF, var)
    return jacobi(n, g - HALF, -h - HALF, var)


def xi_parameters(kind: SystemKind, params: Params, ell: int):
    """Classical-polynomial parameters of xi_ell: (alpha,) or (alpha, beta)."""
    g, h = params.g, params.h
    if kind is SystemKind.RADIAL:
        return (g + ell - mpq(3, 2),)
    alpha = -g - ell - HALF
    if kind is SystemKind.TRIG:
        return (alpha, h + ell - mpq(3, 2))
    return (alpha, -h + ell - mpq(3, 2))


def xi_poly(kind, ell: int, params, var: str = ETA) -> Poly:
    """Deforming polynomial xi_ell(eta; lambda); zero for ell == -1."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    if ell == -1:
        return Poly([], var)
    ps = xi_parameters(kind, params, ell)
    if kind is SystemKind.RADIAL:
        return laguerre(ell, ps[0], var).compose_affine(-1, 0)
    return jacobi(ell, ps[0], ps[1], var)


def xi_derivative(kind: SystemKind, ell: int, params: Params) -> Poly:
    """d xi_ell / d eta via the forward shift relation.

    radial:  d/deta L_ell^(a-1)(-eta) = L_{ell-1}^(a)(-eta)
    DPT:     d/deta P_ell^(a,b)(eta) = (ell+a+b+1)/2 P_{ell-1}^(a+1,b+1)(eta)
    """
    ps = xi_parameters(kind, params, ell)
    if kind is SystemKind.RADIAL:
        return laguerre(ell - 1, ps[0] + 1, ETA).compose_affine(-1, 0)
    a, b = ps
    return jacobi(ell - 1, a + 1, b + 1, ETA) * ((ell + a + b + 1) * HALF)


@dataclass(frozen=True)
class SystemData:
    kind: SystemKind
    params: Params
    ell: int
    delta: tuple
    eta_domain: tuple
    deta_sq: Poly
    eta_second: Poly
    dw0_eta: Poly
    dtw0_eta: Poly
    tilde_E: object
    E1_shifted: object
    n_B: object


def eta_domain(kind: SystemKind) -> tuple:
    kind = SystemKind.parse(kind)
    return {
        SystemKind.RADIAL: (0, math.inf),
        SystemKind.TRIG: (-1, 1),
        SystemKind.HYP: (1, math.inf),
    }[kind]


def domain(kind: SystemKind) -> tuple:
    kind = SystemKind.parse(kind)
    return (0.0, math.pi / 2) if kind is SystemKind.TRIG else (0.0, math.inf)


def make_system(kind, ell: int, params) -> SystemData:
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    if ell < 0:
        raise ConstraintError("ell >= 0 violated")
    check_params(kind, params, ell)
    delta = {SystemKind.RADIAL: (1,), SystemKind.TRIG: (1, 1), SystemKind.HYP: (1, -1)}[kind]
    if kind is SystemKind.HYP and not params.symbolic:
        nb = n_bound(params.g, params.h)
    else:
        nb = math.inf
    return SystemData(
        kind=kind,
        params=params,
        ell=ell,
        delta=delta,
        eta_domain=eta_domain(kind),
        deta_sq=deta_sq(kind),
        eta_second=eta_second(kind),
        dw0_eta=dw0_eta(kind, params),
        dtw0_eta=dtw0_eta(kind, params, ell),
        tilde_E=tilde_energy(kind, params, ell),
        E1_shifted=energy_level(kind, params.shift(kind, ell), 1),
        n_B=nb,
    )


# ---------------------------------------------------------- positivity
@dataclass(frozen=True)
class Certificate:
    """Re-expansion of +-xi_ell in a manifestly positive variable.

    ``coefficients[k]`` multiplies ``variable**k``; ``factors[k]`` lists
    rationals, each checked > 0, whose product (``exponents`` +1 or -1)
    reproduces the coefficient.
    """

    kind: SystemKind
    ell: int
    params: Params
    variable: str
    sign: int
    coefficients: tuple
    factors: tuple = field(repr=False)


def _positive_factors(kind: SystemKind, params: Params, ell: int, k: int):
    """(value, exponent) pairs whose product is the k-th expansion coefficient."""
    g, h = params.g, params.h
    fs = [(mpq(1, math.factorial(k)), 1)]
    if kind is SystemKind.RADIAL:
        fs.append((mpq(1, math.factorial(ell - k)), 1))
        fs += [(g + ell + k - HALF + i, 1) for i in range(ell - k)]
        return fs
    fs.append((mpq(1, math.factorial(ell)), 1))
    fs += [(g + HALF + i, 1) for i in range(ell)]
    fs += [(mpq(ell - k + 1 + i), 1) for i in range(k)]
    if kind is SystemKind.TRIG:
        fs += [(h - g + ell - 1 + i, 1) for i in range(k)]
    else:
        fs += [(g + h + 2 - ell - k + i, 1) for i in range(k)]
    fs += [(g + ell - k + HALF + i, -1) for i in range(k)]
    return fs


def xi_positivity_certificate(kind, ell: int, params) -> Certificate:
    """Expand xi_ell in powers of x^2, sin^2 x or sinh^2 x and prove positivity.

    Raises ArithmeticError with the offending index if any coefficient is not
    positive or disagrees with the factorised closed form.
    """
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    check_params(kind, params)
    xi = xi_poly(kind, ell, params)
    if kind is SystemKind.RADIAL:
        expanded, var, sign = Poly(xi.coeffs, "s"), "x^2", 1
    elif kind is SystemKind.TRIG:
        # eta = cos 2x = 1 - 2 sin^2 x
        expanded, var, sign = Poly(xi.compose_affine(-2, 1).coeffs, "s"), "sin^2 x", (-1) ** ell
    else:
        # eta = cosh 2x = 1 + 2 sinh^2 x
        expanded, var, sign = Poly(xi.compose_affine(2, 1).coeffs, "s"), "sinh^2 x", (-1) ** ell
    expanded = expanded * sign
    coeffs, factors = [], []
    for k in range(ell + 1):
        c = expanded[k]
        fs = _positive_factors(kind, params, ell, k)
        prod = mpq(1)
        for v, e in fs:
            if not v > 0:
                raise ArithmeticError(f"non-positive factor {v} in coefficient {k}")
            prod = prod * v if e > 0 else prod / v
        if prod != c:
            raise ArithmeticError(f"coefficient {k}: expansion {c} != closed form {prod}")
        if not c > 0:
            raise ArithmeticError(f"coefficient {k} = {c} is not positive")
        coeffs.append(c)
        factors.append(tuple(fs))
    return Certificate(kind, ell, params, var, sign, tuple(coeffs), tuple(factors))


# ---------------------------------------------------------------- X_ell
@dataclass(frozen=True)
class XellPoly:
    kind: SystemKind
    ell: int
    n: int
    params: Params
    poly: Poly

    @property
    def degree(self):
        return self.poly.degree

    def zeros_in_domain(self) -> int:
        lo, hi = eta_domain(self.kind)
        return sturm_count_roots(self.poly, lo, hi)


def _guard(name: str, value):
    if not value:
        raise ZeroDivisionError(f"structural denominator {name} vanishes")
    return value


def xell_poly(kind, ell: int, n: int, params) -> XellPoly:
    """Exceptional polynomial P_{ell,n}(eta; lambda), degree ell + n."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    if ell < 0 or n < 0:
        raise ValueError("ell and n must be >= 0")
    if ell == 0:
        return XellPoly(kind, ell, n, params, classical_poly(kind, params, n))
    g, h = params.g, params.h
    shifted = params.shift(kind, ell)
    pn = classical_poly(kind, shifted, n)
    pn1 = classical_poly(kind, shifted, n - 1)
    if kind is SystemKind.RADIAL:
        poly = xi_poly(kind, ell, Params(g + 1)) * pn - xi_poly(kind, ell - 1, Params(g + 2)) * pn1
        return XellPoly(kind, ell, n, params, poly)
    # hyperbolic data is the trigonometric data with h -> -h (and delta = (1,-1))
    s = 1 if kind is SystemKind.TRIG else -1
    hs = s * h
    xi = lambda deg, dg, dh: xi_poly(kind, deg, Params(g + dg, h + s * dh))
    d1 = _guard("(-g+h+2l-2)" if s > 0 else "(-g-h+2l-2)", -g + hs + 2 * ell - 2)
    d2 = _guard(
        "(g+h+2n+2l-1)" if s > 0 else "(g-h+2n+2l-1)", g + hs + 2 * n + 2 * ell - 1
    )
    d3 = _guard("(2g+2n+1)", 2 * g + 2 * n + 1)
    a = (
        xi(ell, 1, 1)
        + xi(ell - 1, 0, 2) * (2 * n * (-g + hs + ell - 1) / (d1 * d2))
        - xi(ell - 2, 1, 3) * (n * (2 * hs + 4 * ell - 3) / (d3 * d1))
    )
    b = xi(ell - 1, 0, 2) * ((-g + hs + ell - 1) * (2 * g + 2 * n + 2 * ell - 1) / (d3 * d2))
    return XellPoly(kind, ell, n, params, a * pn + b * pn1)


# ------------------------------------------------------------- ODE, Rodrigues
def xi_ode_residual(kind, ell: int, params) -> Poly:
    """-xi'' - 2 w~0' xi' - E~ xi rewritten in eta; identically zero."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    xi = xi_poly(kind, ell, params)
    d1 = xi.derivative()
    d2 = d1.derivative()
    lhs = -(eta_second(kind) * d1 + deta_sq(kind) * d2) - dtw0_eta(kind, params, ell) * d1 * 2
    return lhs - xi * tilde_energy(kind, params, ell)


# e^{w0(lambda+delta) - w0(lambda)} = c * d_x eta
_LADDER_C = {SystemKind.RADIAL: HALF, SystemKind.TRIG: mpq(-1, 4), SystemKind.HYP: mpq(1, 4)}


def ladder_up(kind: SystemKind, params: Params, q: Poly) -> Poly:
    """Gauged A(lambda)^dagger in eta space.

    A(lambda)^dagger [e^{w0(lambda+delta)} q(eta)] = e^{w0(lambda)} q~(eta) with
    q~ = -c [(eta' w0'(lambda+delta) + eta' w0'(lambda)) q + (eta')^2 dq/deta].
    """
    c = _LADDER_C[kind]
    up = dw0_eta(kind, params.shift(kind, 1)) + dw0_eta(kind, params)
    return (up * q + deta_sq(kind) * q.derivative()) * (-c)


def rodrigues_polynomial(kind, n: int, params) -> Poly:
    """Polynomial part of A(l)^+ A(l+d)^+ ... A(l+(n-1)d)^+ e^{w0(l+n d)}."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    q = Poly([1], ETA)
    for k in range(n - 1, -1, -1):
        q = ladder_up(kind, params.shift(kind, k), q)
    return q


# ------------------------------------------------------------ pointwise
def eta_of_x(kind: SystemKind, x):
    """(eta, eta', eta'') at x."""
    kind = SystemKind.parse(kind)
    if kind is SystemKind.RADIAL:
        return x * x, 2 * x, 2.0 + 0 * x
    if kind is SystemKind.TRIG:
        return np.cos(2 * x), -2 * np.sin(2 * x), -4 * np.cos(2 * x)
    return np.cosh(2 * x), 2 * np.sinh(2 * x), 4 * np.cosh(2 * x)


def _w0_derivs(kind: SystemKind, params: Params, x):
    """(w0', w0'') in closed form."""
    g = float(params.g)
    if kind is SystemKind.RADIAL:
        return -x + g / x, -1.0 - g / (x * x)
    h = float(params.h)
    if kind is SystemKind.TRIG:
        s, c = np.sin(x), np.cos(x)
        return g * c / s - h * s / c, -g / (s * s) - h / (c * c)
    s, c = np.sinh(x), np.cosh(x)
    return g * c / s - h * s / c, -g / (s * s) - h / (c * c)


def log_w0(kind: SystemKind, params: Params, x):
    g = float(params.g)
    if kind is SystemKind.RADIAL:
        return -x * x / 2 + g * np.log(x)
    h = float(params.h)
    if kind is SystemKind.TRIG:
        return g * np.log(np.sin(x)) + h * np.log(np.cos(x))
    return g * np.log(np.sinh(x)) - h * np.log(np.cosh(x))


def _check_interior(kind: SystemKind, x):
    lo, hi = domain(kind)
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= lo) or np.any(xs >= hi) or np.any(~np.isfinite(xs)):
        raise ValueError(f"x must lie strictly inside {(lo, hi)} for {kind.value}")


def _log_derivs(poly: Poly, eta, deta, d2eta):
    """(f'/f, f''/f) in x for f(x) = poly(eta(x)).

    The polynomial is first reduced to its primitive integer form, so any
    rational rescaling of ``poly`` gives bit-identical results.
    """
    poly = poly.primitive()
    p0 = poly(eta)
    d1 = poly.derivative()
    p1 = d1(eta)
    p2 = d1.derivative()(eta)
    r1 = p1 / p0
    return deta * r1, d2eta * r1 + deta * deta * p2 / p0


def _wl_derivs(kind: SystemKind, ell: int, params: Params, x, xi_scales=(1, 1)):
    """(w_ell', w_ell'') from w_ell = w0(l+ell d) + log xi(l+d) - log xi(l)."""
    eta, deta, d2eta = eta_of_x(kind, x)
    w1, w2 = _w0_derivs(kind, params.shift(kind, ell), x)
    if ell == 0:
        return w1, w2
    num = xi_poly(kind, ell, params.shift(kind, 1)) * xi_scales[1]
    den = xi_poly(kind, ell, params) * xi_scales[0]
    n1, n2 = _log_derivs(num, eta, deta, d2eta)
    m1, m2 = _log_derivs(den, eta, deta, d2eta)
    # (log f)'' = f''/f - (f'/f)^2
    return w1 + n1 - m1, w2 + (n2 - n1 * n1) - (m2 - m1 * m1)


def deformed_potential(kind, ell: int, params, x, xi_scales=(1, 1)):
    """U_ell(x) = (w_ell')^2 + w_ell''.

    ``xi_scales`` rescales xi_ell(.; lambda) and xi_ell(.; lambda+delta)
    exactly before evaluation; the potential must not notice.
    """
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    _check_interior(kind, x)
    w1, w2 = _wl_derivs(kind, ell, params, np.asarray(x, dtype=float), xi_scales)
    return w1 * w1 + w2


def delta_pointwise(kind, ell: int, params, x):
    """Delta_ell(x; lambda) evaluated directly from w_ell in x space."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    _check_interior(kind, x)
    x = np.asarray(x, dtype=float)
    a1, a2 = _wl_derivs(kind, ell, params, x)
    b1, b2 = _wl_derivs(kind, ell, params.shift(kind, 1), x)
    e1 = float(energy_level(kind, params.shift(kind, ell), 1))
    return a1 * a1 - a2 - b1 * b1 - b2 - e1


def log_psi(kind, ell: int, params, x):
    """log psi_ell = w0(x; l+ell d) - log|xi_ell(eta(x); l)|."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    eta, _, _ = eta_of_x(kind, x)
    xi = xi_poly(kind, ell, params)
    return log_w0(kind, params.shift(kind, ell), x) - np.log(np.abs(xi(eta)))


def eigenfunction_residual(kind, ell: int, n: int, params, x):
    """|(-d^2 + U_ell - E) phi_{ell,n}| / local scale at x.

    phi = e^F P(eta) with F = w0(l+ell d) - log xi_ell(l).  Everything is
    divided by e^F, so only log-derivatives of F ever appear.
    """
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    _check_interior(kind, x)
    x = np.asarray(x, dtype=float)
    eta, deta, d2eta = eta_of_x(kind, x)
    w1, w2 = _w0_derivs(kind, params.shift(kind, ell), x)
    if ell:
        m1, m2 = _log_derivs(xi_poly(kind, ell, params), eta, deta, d2eta)
        f1, f2 = w1 - m1, w2 - (m2 - m1 * m1)
    else:
        f1, f2 = w1, w2
    poly = xell_poly(kind, ell, n, params).poly
    dp = poly.derivative()
    p0, p1, p2 = poly(eta), dp(eta), dp.derivative()(eta)
    px = p1 * deta
    pxx = p2 * deta * deta + p1 * d2eta
    phi2 = (f2 + f1 * f1) * p0 + 2 * f1 * px + pxx
    u = deformed_potential(kind, ell, params, x)
    e = float(energy_level(kind, params.shift(kind, ell), n))
    res = np.abs(-phi2 + (u - e) * p0)
    scale = np.maximum.reduce([np.ones_like(res), np.abs(phi2), np.abs(u * p0), np.abs(e * p0)])
    return res / scale
