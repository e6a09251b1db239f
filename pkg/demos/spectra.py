"""
Finite-difference spectra of the deformed Hamiltonians
======================================================

The deformation changes the potential but not the spectrum.  A plain
three-point discretization of -d^2/dx^2 + U_ell recovers the closed-form
levels; halving the spacing shrinks the error about fourfold.
"""

import numpy as np

from xell import SystemKind
from xell.numerics import closed_form_levels, default_grid, fd_spectrum

cases = [
    (SystemKind.RADIAL, 1, (1,), 3),
    (SystemKind.TRIG, 1, (1, 2), 3),
    (SystemKind.TRIG, 3, (2, 5), 3),
    (SystemKind.HYP, 1, (1, 12), 2),
]

# %%
for kind, ell, params, k in cases:
    exact = np.array(closed_form_levels(kind, ell, params, k))
    grid = default_grid(kind, ell, params, k)
    num = fd_spectrum(kind, ell, params, grid, k)
    print(f"{kind.value:9s} ell={ell} params={params}")
    for n, (e, v) in enumerate(zip(exact, num)):
        print(f"    E_{n}: closed form {e:9.4f}   numeric {v:9.4f}")

# %%
# Convergence order: the error ratio between successive grids.
kind, ell, params = SystemKind.TRIG, 2, (1, 2)
exact = np.array(closed_form_levels(kind, ell, params, 2))
grid = default_grid(kind, ell, params, 2, points=250)
prev = None
for _ in range(4):
    err = np.abs(fd_spectrum(kind, ell, params, grid, 2, check=False) - exact)
    ratio = "" if prev is None else f"  ratio {prev[1] / err[1]:.2f}"
    print(f"N={grid.points:5d}  |error E_1| = {err[1]:.3e}{ratio}")
    prev, grid = err, grid.refined()
