"""Floating-point cross-checks: quadrature orthogonality and FD spectra."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal
from scipy.special import gammaln

from .systems import (
    Params,
    SystemKind,
    _as_params,
    check_params,
    deformed_potential,
    energy_level,
    eta_domain,
    log_psi,
    xell_poly,
    xi_poly,
)

__all__ = [
    "QuadratureRule",
    "QuadratureError",
    "GridTooCoarseError",
    "Grid",
    "GramMatrix",
    "gauss_rule",
    "orthogonality_gram",
    "fd_spectrum",
    "default_grid",
    "closed_form_levels",
    "zero_count_report",
]

MAX_ORDER = 2**12


class QuadratureError(RuntimeError):
    pass


class GridTooCoarseError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    family: str
    params: tuple
    order: int

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _recurrence(family: str, order: int, a: float, b: float):
    """Monic recurrence (diagonal, off-diagonal) and zeroth moment."""
    k = np.arange(order, dtype=float)
    if family == "laguerre":
        diag = 2 * k + a + 1
        off = np.sqrt(k[1:] * (k[1:] + a))
        return diag, off, math.exp(gammaln(a + 1))
    if family != "jacobi":
        raise ValueError(f"unknown weight family {family!r}")
    s = 2 * k + a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        diag = (b * b - a * a) / (s * (s + 2))
    diag[0] = (b - a) / (a + b + 2)
    kk = k[1:]
    ss = s[1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = 4 * kk * (kk + a) * (kk + b) * (kk + a + b) / (ss * ss * (ss + 1) * (ss - 1))
    if order > 1:
        beta[0] = 4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b))
    mu0 = math.exp((a + b + 1) * math.log(2) + gammaln(a + 1) + gammaln(b + 1) - gammaln(a + b + 2))
    return diag, np.sqrt(beta), mu0


def gauss_rule(family: str, order: int, a: float = 0.0, b: float = 0.0) -> QuadratureRule:
    """Golub-Welsch rule for x^a e^-x on (0, inf) or (1-x)^a (1+x)^b on (-1, 1)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if a <= -1 or b <= -1:
        raise ValueError("weight exponents must exceed -1")
    diag, off, mu0 = _recurrence(family, order, float(a), float(b))
    if order == 1:
        return QuadratureRule(diag.copy(), np.array([mu0]), family, (a, b), 1)
    last = None
    for driver in ("stemr", "stev"):
        try:
            nodes, vecs = eigh_tridiagonal(diag, off, lapack_driver=driver)
            break
        except (LinAlgError, ValueError) as exc:
            last = exc
    else:
        raise QuadratureError(f"tridiagonal eigensolver failed: {last}")
    idx = np.argsort(nodes)
    return QuadratureRule(nodes[idx], mu0 * vecs[0, idx] ** 2, family, (a, b), order)


# ------------------------------------------------------------------ Gram
@dataclass(frozen=True)
class GramMatrix:
    raw: np.ndarray
    normalized: np.ndarray
    n_max: int
    order: int
    last_change: float
    detail: str = ""

    @property
    def max_offdiag(self) -> float:
        off = self.normalized - np.diag(np.diag(self.normalized))
        return float(np.max(np.abs(off))) if off.size else 0.0


def _normalize(g: np.ndarray) -> np.ndarray:
    d = np.sqrt(np.abs(np.diag(g)))
    return g / np.outer(d, d)


def _hyp_cutoff(kind, ell, params: Params, polys, xi) -> float:
    """Largest x still carrying integrand mass above 1e-14 of the peak."""
    xs = np.linspace(1e-3, 200.0, 20001)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        lp = 2 * log_psi(kind, ell, params, xs)
        env = np.max([lp + 2 * np.log(np.abs(p(np.cosh(2 * xs))) + 1e-300) for p in polys], axis=0)
    env = np.where(np.isfinite(env), env, -np.inf)
    peak = np.max(env)
    alive = np.nonzero(env > peak + math.log(1e-14))[0]
    return float(xs[alive[-1]]) * 1.05 + 0.5


def _gram_at_order(kind, ell, params: Params, polys, xi, order, x_max=None):
    n = len(polys)
    if kind is SystemKind.RADIAL:
        rule = gauss_rule("laguerre", order, float(params.g) + ell - 0.5)
        eta, w = rule.nodes, rule.weights
        vals = np.array([p(eta) for p in polys]) / xi(eta)
    elif kind is SystemKind.TRIG:
        rule = gauss_rule("jacobi", order, float(params.g) + ell - 0.5, float(params.h) + ell - 0.5)
        eta, w = rule.nodes, rule.weights
        vals = np.array([p(eta) for p in polys]) / xi(eta)
    else:
        # x space on (0, x_max); the x^{2(g+ell)} edge behaviour goes into the weight
        power = 2 * (float(params.g) + ell)
        rule = gauss_rule("jacobi", order, 0.0, power)
        x = x_max * (1 + rule.nodes) / 2
        lp = 2 * log_psi(kind, ell, params, x) - power * np.log(x)
        w = rule.weights * np.exp(lp) * (x_max / 2) ** (power + 1)
        eta = np.cosh(2 * x)
        # psi already carries 1/xi
        vals = np.array([p(eta) for p in polys])
    g = (vals * w) @ vals.T
    return g.reshape(n, n)


def orthogonality_gram(kind, ell: int, params, n_max: int, order: int | None = None,
                       tol: float = 1e-10) -> GramMatrix:
    """Gram matrix of P_{ell,0..n_max} under psi_ell^2, with adaptive order doubling."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    check_params(kind, params, ell, n_max if kind is SystemKind.HYP else None)
    polys = [xell_poly(kind, ell, n, params).poly for n in range(n_max + 1)]
    xi = xi_poly(kind, ell, params)
    x_max = _hyp_cutoff(kind, ell, params, polys, xi) if kind is SystemKind.HYP else None
    order = order or max(32, 2 * (ell + n_max) + 8)
    prev = None
    while order <= MAX_ORDER:
        g = _gram_at_order(kind, ell, params, polys, xi, order, x_max)
        norm = _normalize(g)
        if prev is not None:
            diag_change = np.max(np.abs(np.diag(g) - np.diag(prev[0])) / np.abs(np.diag(g)))
            change = max(float(np.max(np.abs(norm - prev[1]))), float(diag_change))
            if change < tol:
                detail = f"x_max={x_max:.3f}" if x_max is not None else ""
                return GramMatrix(g, norm, n_max, order, change, detail)
        prev = (g, norm)
        order *= 2
    raise QuadratureError(f"Gram matrix did not settle below {tol} by order {MAX_ORDER}")


# ------------------------------------------------------------ FD spectra
@dataclass(frozen=True)
class Grid:
    x_lo: float
    x_hi: float
    points: int

    def __post_init__(self):
        if self.points < 3 or not self.x_lo < self.x_hi:
            raise ValueError("grid needs points >= 3 and x_lo < x_hi")

    def refined(self) -> "Grid":
        return Grid(self.x_lo, self.x_hi, 2 * self.points - 1)


def closed_form_levels(kind, ell: int, params, k: int) -> list[float]:
    """E_n(lambda + ell delta) for n < k."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    shifted = params.shift(kind, ell)
    return [float(energy_level(kind, shifted, n)) for n in range(k)]


def default_grid(kind, ell: int, params, k: int, points: int = 4000) -> Grid:
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    if kind is SystemKind.RADIAL:
        turning = math.sqrt(4 * k + 2 * float(params.g) + 2 * ell + 2)
        return Grid(1e-3, turning + 7.0, points)
    if kind is SystemKind.TRIG:
        return Grid(1e-3, math.pi / 2 - 1e-3, points)
    kappa = float(params.h - params.g) - 2 * ell - 2 * (k - 1)
    if kappa <= 0:
        raise ValueError("requested levels are not bound in the deformed hyperbolic system")
    return Grid(1e-3, 36.0 / kappa + 1.0, points)


def _lowest(kind, ell, params, grid: Grid, k: int) -> np.ndarray:
    x = np.linspace(grid.x_lo, grid.x_hi, grid.points)[1:-1]
    h = (grid.x_hi - grid.x_lo) / (grid.points - 1)
    diag = 2.0 / h**2 + deformed_potential(kind, ell, params, x)
    off = np.full(len(x) - 1, -1.0 / h**2)
    return eigh_tridiagonal(
        diag, off, eigvals_only=True, select="i", select_range=(0, k - 1), lapack_driver="stebz"
    )


def fd_spectrum(kind, ell: int, params, grid: Grid | None = None, k: int = 3,
                check: bool = True, tol: float = 1e-2) -> np.ndarray:
    """k lowest eigenvalues of the 3-point discretisation of -d^2/dx^2 + U_ell.

    With ``check`` the run is repeated at half spacing; a shift of any level
    by more than 10*tol raises GridTooCoarseError.
    """
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    check_params(kind, params, ell, k - 1 if kind is SystemKind.HYP else None)
    grid = grid or default_grid(kind, ell, params, k)
    vals = _lowest(kind, ell, params, grid, k)
    if check:
        fine = _lowest(kind, ell, params, grid.refined(), k)
        moved = float(np.max(np.abs(fine - vals)))
        if moved > 10 * tol:
            raise GridTooCoarseError(f"half-spacing rerun moved a level by {moved:.3g}")
    return vals


def zero_count_report(kind, ell: int, params, n_max: int) -> list[tuple[int, int]]:
    """(n, number of zeros of P_{ell,n} inside the eta domain) for n <= n_max."""
    kind = SystemKind.parse(kind)
    params = _as_params(kind, params)
    check_params(kind, params, ell)
    return [(n, xell_poly(kind, ell, n, params).zeros_in_domain()) for n in range(n_max + 1)]
