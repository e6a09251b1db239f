"""Classical Laguerre and Jacobi polynomials by direct expansion.

Parameters may be rationals or symbols (``symbol("alpha")``); every
constructor works over whatever coefficient ring the parameters live in.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from gmpy2 import mpq

from .ratpoly import Poly, factorial, pochhammer, symbol

__all__ = [
    "LaguerreSpec",
    "JacobiSpec",
    "laguerre_poly",
    "jacobi_poly",
    "laguerre",
    "jacobi",
    "jacobi_u",
    "u_to_x",
    "laguerre_recurrence",
    "jacobi_recurrence",
    "forward_shift_residual",
    "reflection_residual",
    "jacobi_laguerre_limit_error",
]


@dataclass(frozen=True)
class LaguerreSpec:
    n: int
    alpha: object


@dataclass(frozen=True)
class JacobiSpec:
    n: int
    alpha: object
    beta: object


def _is_rational(v) -> bool:
    return not isinstance(v, Poly)


def laguerre(n: int, alpha, var: str = "x") -> Poly:
    """L_n^(alpha)(var); ``n == -1`` gives the zero polynomial."""
    if n < -1:
        raise ValueError(f"Laguerre degree must be >= -1, got {n}")
    if n == -1:
        return Poly([], var)
    nf = factorial(n)
    # (alpha+k+1)_{n-k} built downward from k = n
    tail = [None] * (n + 1)
    acc = mpq(1)
    for k in range(n, -1, -1):
        tail[k] = acc
        acc = acc * (alpha + k)
    coeffs = []
    for k in range(n + 1):
        coeffs.append(tail[k] * (pochhammer(-n, k) / (factorial(k) * nf)))
    return Poly(coeffs, var)


def _jacobi_u_coeffs(n: int, alpha, beta, sigma=None) -> list:
    """Coefficients of P_n^(alpha,beta) in powers of u = (1-x)/2.

    Only alpha and alpha + beta enter; ``sigma`` supplies the latter directly
    (``beta`` is then ignored), which keeps symbolic products univariate.
    The ratio (alpha+1)_n/(alpha+1)_k is formed as the product
    (alpha+k+1)...(alpha+n), so no parameter division ever happens.
    """
    if n < -1:
        raise ValueError(f"Jacobi degree must be >= -1, got {n}")
    if n == -1:
        return []
    if _is_rational(alpha):
        a = mpq(alpha)
        if a.denominator == 1 and a < 0 and -a <= n:
            raise ValueError(
                f"alpha={a} is a negative integer with |alpha| <= n={n}; "
                "the expansion is 0/0 there"
            )
    nf = factorial(n)
    s = (alpha + beta if sigma is None else sigma) + (n + 1)
    tail = [None] * (n + 1)
    acc = mpq(1)
    for k in range(n, -1, -1):
        tail[k] = acc
        acc = acc * (alpha + k)
    # c_k = (-n)_k (s)_k (alpha+k+1)_{n-k} / (k! n!), (s)_k accumulated upward
    coeffs = []
    rising = mpq(1)
    for k in range(n + 1):
        c = rising * tail[k]
        coeffs.append(c * (pochhammer(-n, k) / (factorial(k) * nf)))
        rising = rising * (s + k)
    return coeffs


def jacobi_u(n: int, alpha, beta, var: str = "u", sigma=None) -> Poly:
    """P_n^(alpha,beta) as a polynomial in u = (1-x)/2."""
    return Poly(_jacobi_u_coeffs(n, alpha, beta, sigma), var)


def u_to_x(p: Poly, var: str = "x") -> Poly:
    """Rewrite a polynomial in u = (1-x)/2 as a polynomial in x."""
    out = [mpq(0)] * max(len(p.coeffs), 1)
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        scale = mpq(1, 2**k)
        for j in range(k + 1):
            b = comb(k, j) * scale
            out[j] = out[j] + (c * (-b if j & 1 else b))
    return Poly(out, var)


def jacobi(n: int, alpha, beta, var: str = "x") -> Poly:
    """P_n^(alpha,beta)(var) from the expansion in powers of (1-var)/2."""
    return u_to_x(Poly(_jacobi_u_coeffs(n, alpha, beta), "u"), var)


def laguerre_poly(spec: LaguerreSpec, var: str = "x") -> Poly:
    return laguerre(spec.n, spec.alpha, var)


def jacobi_poly(spec: JacobiSpec, var: str = "x") -> Poly:
    return jacobi(spec.n, spec.alpha, spec.beta, var)


# ---------------------------------------------------------------- oracles
def laguerre_recurrence(n: int, alpha, var: str = "x") -> Poly:
    """Three-term recurrence; independent check on :func:`laguerre`."""
    x = symbol(var)
    prev, cur = Poly([], var), Poly([1], var)
    for k in range(n):
        nxt = ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
        prev, cur = cur, nxt
    return cur


def jacobi_recurrence(n: int, alpha, beta, var: str = "x") -> Poly:
    """Three-term recurrence for rational parameters (generic values only)."""
    alpha, beta = mpq(alpha), mpq(beta)
    x = symbol(var)
    p0 = Poly([1], var)
    if n == 0:
        return p0
    p1 = Poly([(alpha - beta) / 2, (alpha + beta + 2) / 2], var)
    prev, cur = p0, p1
    for k in range(2, n + 1):
        s = 2 * k + alpha + beta
        a1 = 2 * k * (k + alpha + beta) * (s - 2)
        a2 = (s - 1) * (alpha * alpha - beta * beta)
        a3 = (s - 2) * (s - 1) * s
        a4 = 2 * (k + alpha - 1) * (k + beta - 1) * s
        prev, cur = cur, ((a2 + a3 * x) * cur - a4 * prev) / a1
    return cur


# ------------------------------------------------------- checkable relations
def forward_shift_residual(family: str, n: int, alpha=None, beta=None) -> Poly:
    """d/dx p_n minus its forward-shift image; identically zero.

    laguerre: d/dx L_n^(a) = -L_{n-1}^(a+1)
    jacobi:   d/dx P_n^(a,b) = (n+a+b+1)/2 * P_{n-1}^(a+1,b+1)
    Parameters default to symbols.
    """
    alpha = symbol("alpha") if alpha is None else alpha
    if family == "laguerre":
        return laguerre(n, alpha).derivative() + laguerre(n - 1, alpha + 1)
    if family == "jacobi":
        beta = symbol("beta") if beta is None else beta
        lhs = jacobi(n, alpha, beta).derivative()
        rhs = jacobi(n - 1, alpha + 1, beta + 1) * ((alpha + beta + (n + 1)) * mpq(1, 2))
        return lhs - rhs
    raise ValueError(f"unknown family {family!r}")


def reflection_residual(n: int, alpha=None, beta=None) -> Poly:
    """P_n^(a,b)(-x) - (-1)^n P_n^(b,a)(x)."""
    alpha = symbol("alpha") if alpha is None else alpha
    beta = symbol("beta") if beta is None else beta
    lhs = jacobi(n, alpha, beta).compose_affine(-1, 0)
    return lhs - jacobi(n, beta, alpha) * (-1) ** n


def jacobi_laguerre_limit_error(n: int, alpha, beta, x) -> float:
    """|P_n^(alpha,beta)(1 - 2x/beta) - L_n^(alpha)(x)|.

    Both sides are evaluated exactly at the rational images of the inputs,
    so the returned float carries no cancellation error.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    alpha, beta, x = mpq(alpha), mpq(beta), mpq(x)
    lhs = jacobi(n, alpha, beta)(1 - 2 * x / beta)
    rhs = laguerre(n, alpha)(x)
    return abs(float(lhs - rhs))
