"""Polynomial identities behind shape invariance, as exact residuals.

Every ``*_residual`` function returns LHS - RHS fully expanded; the contract
is that the result is the zero polynomial.  Parameters default to symbols,
so a zero result proves the identity for all parameter values at that degree.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from .classical import jacobi_u, laguerre, u_to_x
from .ratpoly import Poly, symbol
from .systems import (
    ConstraintError,
    Params,
    SystemKind,
    _as_params,
    check_params,
    deta_sq,
    dtw0_eta,
    dw0_eta,
    tilde_energy,
    xi_derivative,
    xi_poly,
)

__all__ = [
    "LemmaId",
    "ResidualReport",
    "LimitReport",
    "lemma_residual",
    "cubic_laguerre_terms",
    "cubic_laguerre_residual",
    "cubic_jacobi_terms",
    "cubic_jacobi_residual",
    "laguerre_pit",
    "jacobi_pit",
    "laguerre_limit_of_jacobi_identity",
    "shape_invariance_terms",
    "shape_invariance_residual",
    "trig_hyp_reduction",
    "dpt_alpha_beta",
    "LIMIT_TERM_MAP",
]


class LemmaId(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"


@dataclass(frozen=True)
class ResidualReport:
    name: str
    index: int
    mode: str
    residual: Poly = field(repr=False)
    degree_bound: int | None = None

    @property
    def is_zero(self) -> bool:
        return not self.residual.coeffs


def _alpha(alpha):
    return symbol("alpha") if alpha is None else alpha


def _beta(beta):
    return symbol("beta") if beta is None else beta


def lemma_residual(tag, n: int, alpha=None, beta=None) -> Poly:
    """Residual of one of the four linear lemmas.

    A: L_n^(a-1) + L_{n-1}^(a) = L_n^(a)
    B: x L_{n-1}^(a+1) - a L_{n-1}^(a) = -n L_n^(a-1)
    C: 2(a-1) P_n^(a-1,b) - (n+a+b)(1-x) P_{n-1}^(a,b+1) = 2(n+a-1) P_n^(a-2,b+1)
    D: 2(b+1) P_n^(a-1,b+1) + (n+a+b+1)(1+x) P_{n-1}^(a,b+2) = 2(n+b+1) P_n^(a,b)
    """
    tag = LemmaId(tag.value if isinstance(tag, LemmaId) else tag)
    a = _alpha(alpha)
    x = symbol("x")
    if tag is LemmaId.A:
        return laguerre(n, a - 1) + laguerre(n - 1, a) - laguerre(n, a)
    if tag is LemmaId.B:
        return x * laguerre(n - 1, a + 1) - a * laguerre(n - 1, a) + laguerre(n, a - 1) * n
    # Jacobi lemmas are expanded in u = (1-x)/2, where 1-x = 2u and 1+x = 2-2u.
    # Symbolically the second parameter is sigma = alpha + beta: an invertible
    # change of variables under which every Pochhammer factor is univariate.
    sig = symbol("sigma") if beta is None else a + beta
    b = sig - a
    u = symbol("u")

    def P(m, da, ds):
        return jacobi_u(m, a + da, None, sigma=sig + ds)

    if tag is LemmaId.C:
        lhs = 2 * (a - 1) * P(n, -1, -1) - (n + sig) * (2 * u) * P(n - 1, 0, 1)
        res = lhs - 2 * (n + a - 1) * P(n, -2, -1)
    else:
        lhs = 2 * (b + 1) * P(n, -1, 0) + (n + sig + 1) * (2 - 2 * u) * P(n - 1, 0, 2)
        res = lhs - 2 * (n + b + 1) * P(n, 0, 0)
    return u_to_x(res)


# ------------------------------------------------------------ cubic identities
def cubic_laguerre_terms(ell: int, alpha=None) -> list[Poly]:
    """The five cubic summands of the degree-3*ell Laguerre identity."""
    a = _alpha(alpha)
    x = symbol("x")
    L = lambda n, da: laguerre(n, a + da)
    return [
        -x * L(ell - 1, 2) * L(ell, -1) * L(ell, 0),
        -a * L(ell - 1, 0) * L(ell, 1) * L(ell, 0),
        (x + a + 1) * L(ell - 1, 1) * L(ell, 1) * L(ell, -1),
        x * L(ell - 1, 0) * L(ell - 1, 1) * L(ell, 1),
        -x * L(ell - 1, 1) * L(ell - 1, 2) * L(ell, -1),
    ]


def cubic_laguerre_residual(ell: int, alpha=None) -> Poly:
    return sum(cubic_laguerre_terms(ell, alpha), Poly([], "x"))


def cubic_jacobi_terms(ell: int, alpha=None, beta=None, var: str = "x") -> list[Poly]:
    """The five cubic summands of the degree-3*ell Jacobi identity.

    With ``var="u"`` the summands are returned in u = (1-x)/2, which skips the
    re-expansion of every factor into powers of x.
    """
    a, b = _alpha(alpha), _beta(beta)
    u = symbol("u")
    P = lambda n, da, db: jacobi_u(n, a + da, b + db)
    one_minus, one_plus = 2 * u, 2 - 2 * u
    k = ell + a + b + 1
    terms = [
        2 * (a - 1) * one_plus * P(ell - 1, -1, 3) * P(ell, 0, 0) * P(ell, -1, 1),
        2 * (b + 1) * one_minus * P(ell - 1, 1, 1) * P(ell, -2, 2) * P(ell, -1, 1),
        -2 * (a * one_plus + (b + 2) * one_minus) * P(ell - 1, 0, 2) * P(ell, 0, 0) * P(ell, -2, 2),
        k * one_minus * one_plus * P(ell - 1, 1, 1) * P(ell - 1, 0, 2) * P(ell, -2, 2),
        -k * one_minus * one_plus * P(ell - 1, 0, 2) * P(ell - 1, -1, 3) * P(ell, 0, 0),
    ]
    if var == "u":
        return terms
    return [u_to_x(t, var) for t in terms]


def cubic_jacobi_residual(ell: int, alpha=None, beta=None) -> Poly:
    return u_to_x(sum(cubic_jacobi_terms(ell, alpha, beta, var="u"), Poly([], "u")))


def _pit_values(count: int, offset: mpq) -> list[mpq]:
    # non-integers keep every shifted Jacobi parameter away from the 0/0 set
    return [mpq(k) + offset for k in range(-(count // 2), count - count // 2)]


def laguerre_pit(ell: int) -> ResidualReport:
    """Evaluate the Laguerre cubic residual at 3*ell+3 distinct rational alphas.

    A nonzero residual has alpha-degree <= 3*ell+1, so vanishing on this many
    points forces the symbolic residual to vanish as well.
    """
    worst = Poly([], "x")
    for a in _pit_values(3 * ell + 3, mpq(1, 3)):
        r = cubic_laguerre_residual(ell, a)
        if r:
            worst = r
            break
    return ResidualReport("cubic-laguerre-pit", ell, "grid", worst, 3 * ell + 1)


def jacobi_pit(ell: int) -> ResidualReport:
    """Evaluate the Jacobi cubic residual on a (3*ell+4)^2 grid of rationals."""
    worst = Poly([], "x")
    m = 3 * ell + 4
    for a in _pit_values(m, mpq(1, 3)):
        for b in _pit_values(m, mpq(2, 7)):
            r = cubic_jacobi_residual(ell, a, b)
            if r:
                return ResidualReport("cubic-jacobi-pit", ell, "grid", r, 3 * ell + 3)
    return ResidualReport("cubic-jacobi-pit", ell, "grid", worst, 3 * ell + 3)


# ------------------------------------------------------------- Jacobi -> Laguerre
#: Jacobi summand i turns into Laguerre summand LIMIT_TERM_MAP[i].
LIMIT_TERM_MAP = (1, 0, 2, 4, 3)


@dataclass(frozen=True)
class LimitReport:
    ell: int
    alpha: mpq
    betas: tuple
    #: gaps[i][t]: relative max-coefficient gap of summand t at betas[i]
    gaps: tuple
    jacobi_zero: tuple
    laguerre_zero: bool

    def ratios(self, term: int) -> list[float]:
        """gap(beta_i) / gap(beta_{i+1}) for one summand."""
        g = [row[term] for row in self.gaps]
        return [a / b for a, b in zip(g, g[1:])]


def _rel_gap(p: Poly, q: Poly) -> float:
    scale = q.max_abs_coeff() or 1.0
    return (p - q).max_abs_coeff() / scale


def laguerre_limit_of_jacobi_identity(ell: int, beta_values, alpha=mpq(7, 3)) -> LimitReport:
    """Watch the Jacobi summands turn into the Laguerre ones as beta grows.

    Each Jacobi summand is evaluated at (alpha+1, beta), pulled back through
    x -> 1 - 2x/beta and divided by -4, then compared coefficientwise with the
    matching Laguerre summand at alpha.
    """
    if ell < 1:
        raise ValueError("ell >= 1 required")
    alpha = mpq(alpha)
    lag = cubic_laguerre_terms(ell, alpha)
    gaps, jzero = [], []
    betas = tuple(mpq(b) for b in beta_values)
    for beta in betas:
        # x -> 1 - 2x/beta is u -> x/beta in the u = (1-x)/2 basis
        jt = [
            Poly(t.coeffs, "x").compose_affine(1 / beta, 0) / -4
            for t in cubic_jacobi_terms(ell, alpha + 1, beta, var="u")
        ]
        jzero.append(not sum(jt, Poly([], "x")))
        row = [0.0] * 5
        for i, t in enumerate(jt):
            row[LIMIT_TERM_MAP[i]] = _rel_gap(t, lag[LIMIT_TERM_MAP[i]])
        gaps.append(tuple(row))
    return LimitReport(
        ell, alpha, betas, tuple(gaps), tuple(jzero), not sum(lag, Poly([], "x"))
    )


# ------------------------------------------------------------ shape invariance
def shape_invariance_terms(kind, ell: int, params, check: bool = True) -> list[Poly]:
    """The seven summands of Delta_ell * xi(l) xi(l+d) xi(l+2d) / 2, in eta.

    Each d_x xi is carried as eta' * d_x xi = (eta')^2 * dxi/deta, so every
    derivative-bearing summand is a polynomial times exactly one surplus
    factor (eta')^2, removed by exact division.
    """
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    if ell < 1:
        raise ValueError("ell >= 1 required")
    if check:
        check_params(kind, params, ell)
    S = deta_sq(kind)
    lam = [params.shift(kind, k) for k in range(3)]
    X = [xi_poly(kind, ell, p) for p in lam]
    A = [S * xi_derivative(kind, ell, p) for p in lam]
    wt0, wt2 = dtw0_eta(kind, lam[0], ell), dtw0_eta(kind, lam[2], ell)
    w_l = dw0_eta(kind, params.shift(kind, ell))
    w_l1 = dw0_eta(kind, params.shift(kind, ell + 1))
    de = (tilde_energy(kind, lam[2], ell) - tilde_energy(kind, lam[0], ell)) / 2

    def cut(p: Poly) -> Poly:
        q, r = divmod(p, S)
        if r:
            raise ArithmeticError(f"(eta')^2 does not divide a summand (remainder {r})")
        return q

    return [
        cut(wt2 * A[2] * X[0] * X[1]),
        -cut(wt0 * A[0] * X[1] * X[2]),
        X[0] * X[1] * X[2] * de,
        cut(w_l * (A[1] * X[0] - A[0] * X[1]) * X[2]),
        -cut(w_l1 * (A[2] * X[1] - A[1] * X[2]) * X[0]),
        -cut(A[0] * A[1] * X[2]),
        cut(A[1] * A[2] * X[0]),
    ]


def shape_invariance_residual(kind, ell: int, params) -> ResidualReport:
    kind = SystemKind.parse(kind)
    terms = shape_invariance_terms(kind, ell, params)
    res = sum(terms, Poly([], "eta"))
    return ResidualReport(f"shape-{kind.value}", ell, "rational", res, 3 * ell)


def dpt_alpha_beta(kind, ell: int, params) -> tuple:
    """(alpha, beta) of the cubic Jacobi identity for a DPT system."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    alpha = -params.g - ell - mpq(1, 2)
    sh = params.h if kind is SystemKind.TRIG else -params.h
    return alpha, sh + ell - mpq(3, 2)


def trig_hyp_reduction(ell: int, alpha, beta) -> tuple[list[Poly], list[Poly]]:
    """Normalised shape-invariance summands of both DPT systems at one (alpha, beta).

    Trigonometric summands are divided by -(ell+alpha+beta+1), hyperbolic ones
    by +(ell+alpha+beta+1).  The two lists are expected to be literally equal.
    One of the two parameter points necessarily has h < 0, so constraint
    checks are switched off: this is an algebraic statement.
    """
    alpha, beta = mpq(alpha), mpq(beta)
    k = ell + alpha + beta + 1
    if not k:
        raise ConstraintError("ell + alpha + beta + 1 = 0: reduction is degenerate")
    g = -alpha - ell - mpq(1, 2)
    trig = shape_invariance_terms(SystemKind.TRIG, ell, Params(g, beta - ell + mpq(3, 2)), check=False)
    hyp = shape_invariance_terms(SystemKind.HYP, ell, Params(g, -beta + ell - mpq(3, 2)), check=False)
    return [t / -k for t in trig], [t / k for t in hyp]
