"""Cauchy-Green transform vs closed forms.

T f(zeta) = -(1/pi) int_D f(omega) / (omega - zeta) dA solves du/d(conj zeta) = f.
Two inputs have elementary answers on the unit disc:

    T(1)      = conj(zeta) inside,      1/zeta outside
    T(omega)  = |zeta|^2 - 1 inside,    0 outside

The discrete operator is corrected to be exact on constants, so the
interior T(1) identity holds to rounding at every resolution; convergence
under refinement shows up on T(omega) and on the exterior values.
"""

import pathlib

import numpy as np

from jholo import CGOperator, GridFunction, make_grid
from jholo.report import save_loglog

OUT = pathlib.Path(__file__).with_name("output")

Ns = [32, 64, 128]
probes = np.array([1.5, 2.0, 4.0]) * np.exp(0.31j)

rows = {"interior T(1)": [], "interior T(omega)": [], "exterior T(1)": []}
for N in Ns:
    grid = make_grid(1.0, N)
    op = CGOperator(grid)
    ones = np.ones(grid.nodes.size, dtype=complex)

    t1 = op.transform(GridFunction(grid, ones))
    err_const = np.abs(t1.values - np.conj(grid.nodes)).max()

    tw = op.transform(GridFunction(grid, grid.nodes.copy()))
    inner = grid.interior_mask()
    err_omega = np.abs(tw.values - (np.abs(grid.nodes) ** 2 - 1))[inner].max()

    err_ext = np.abs(op.exterior(ones, probes) - 1.0 / probes).max()

    rows["interior T(1)"].append(err_const)
    rows["interior T(omega)"].append(err_omega)
    rows["exterior T(1)"].append(err_ext)
    print(f"N = {N:4d}:  T(1) interior {err_const:.2e}   "
          f"T(omega) interior {err_omega:.2e}   T(1) exterior {err_ext:.2e}")

ratio = rows["interior T(omega)"][-2] / rows["interior T(omega)"][-1]
print(f"\nT(omega) error ratio N=64 -> N=128: {ratio:.2f} "
      "(second-order refinement gives ~4)")

path = save_loglog(str(OUT / "cg_closed_forms.svg"), Ns,
                   {k: np.maximum(v, 1e-17) for k, v in rows.items()},
                   "N", "max error vs closed form",
                   "Cauchy-Green transform vs closed forms")
print(f"plot written to {path}")
