"""
Cubic identities in three classical polynomials
================================================

Each identity is a sum of five products of three Laguerre (or Jacobi)
polynomials.  No single product vanishes; the sum does, as an exact
polynomial in x whose coefficients are themselves polynomials in the
parameters.
"""

import time

from xell.identities import cubic_jacobi_residual, cubic_laguerre_residual, cubic_laguerre_terms

# %%
# The five summands for ell = 2, with alpha left symbolic.  Every one has
# degree 3*ell in x.
for k, term in enumerate(cubic_laguerre_terms(2)):
    print(f"summand {k}: degree {term.degree}, {len(term.coeffs)} coefficients in Q[alpha]")

# %%
# Their sum is the zero polynomial, exactly.  Timing the whole ladder shows
# the cost grows gently with ell.
for ell in range(0, 11):
    t0 = time.perf_counter()
    res = cubic_laguerre_residual(ell)
    print(f"Laguerre ell={ell:2d}: zero={res.is_zero}  ({time.perf_counter() - t0:.3f} s)")

# %%
# The Jacobi version carries two symbolic parameters and is heavier.
for ell in range(0, 6):
    t0 = time.perf_counter()
    res = cubic_jacobi_residual(ell)
    print(f"Jacobi   ell={ell:2d}: zero={res.is_zero}  ({time.perf_counter() - t0:.3f} s)")
