"""
Deformed potentials and orthogonality
=====================================

U_ell differs from the undeformed potential only by a bounded rational
correction in eta.  The polynomials P_{ell,n} are orthogonal with respect
to psi_ell^2 = e^{2 w_0} / xi_ell^2, which quadrature confirms.
"""

import numpy as np

from xell import SystemKind
from xell.numerics import orthogonality_gram
from xell.systems import deformed_potential

kind, params = SystemKind.RADIAL, (2,)
xs = np.linspace(0.3, 5.0, 10)

# %%
print("   x     U_0        U_1        U_2")
table = np.array([deformed_potential(kind, ell, params, xs) for ell in range(3)])
for x, row in zip(xs, table.T):
    print(f"{x:5.2f} " + " ".join(f"{u:10.4f}" for u in row))

# %%
# Normalized Gram matrices: identity up to quadrature error.
for kind, params in [(SystemKind.RADIAL, (2,)), (SystemKind.TRIG, (1, 2)), (SystemKind.HYP, (1, 30))]:
    for ell in (1, 3):
        gram = orthogonality_gram(kind, ell, params, 5)
        print(f"{kind.value:9s} ell={ell}: order {gram.order:4d}, max off-diagonal {gram.max_offdiag:.1e}")

# %%
# Optional picture, only when matplotlib is around.
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fine = np.linspace(0.3, 5.0, 400)
    fig, ax = plt.subplots()
    for ell in range(4):
        ax.plot(fine, deformed_potential(SystemKind.RADIAL, ell, (2,), fine), label=f"ell = {ell}")
    ax.set_ylim(-5, 40)
    ax.set_xlabel("x")
    ax.set_ylabel("U_ell(x)")
    ax.legend()
    fig.savefig("radial_potentials.png", dpi=120)
    print("wrote radial_potentials.png")
