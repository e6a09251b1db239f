"""
Exceptional polynomials and their zeros
=======================================

P_{ell,n} has degree ell + n but only n zeros inside the physical domain,
so the remaining ell zeros lie outside it or off the real line.  Sturm
sequences count the zeros exactly, with no floating point involved.
"""

from xell import Q, SystemKind, sturm_count_roots, xell_poly, xi_poly
from xell.systems import eta_domain

kind, params = SystemKind.TRIG, (Q(3, 2), Q(7, 2))
lo, hi = eta_domain(kind)

# %%
# The denominator polynomial xi_ell never vanishes on the domain.
for ell in range(1, 5):
    xi = xi_poly(kind, ell, params)
    print(f"xi_{ell}: degree {xi.degree}, zeros in ({lo}, {hi}): {sturm_count_roots(xi, lo, hi)}")

# %%
# Zero counts of P_{ell,n}: inside the domain and on the whole real line.
print("\n ell  n  degree  inside  real")
for ell in (1, 2, 3):
    for n in range(5):
        p = xell_poly(kind, ell, n, params)
        print(f"{ell:4d} {n:2d} {p.degree:7d} {p.zeros_in_domain():7d} {sturm_count_roots(p.poly):5d}")

# %%
# Exact coefficients are available for export.
p = xell_poly(SystemKind.RADIAL, 2, 1, Q(3, 2))
print("\nradial P_{2,1}(eta), g = 3/2:", p.poly)
