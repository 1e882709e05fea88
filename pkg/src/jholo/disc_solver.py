"""Pseudoholomorphic discs by Picard iteration on the integral equation.

A map z: D -> C^n is a disc of the structure with matrix field A when

    z_zetabar - A(z) zbar_zetabar = 0.

Composing with the Cauchy-Green transform turns the equation into the fixed
point problem z = w + T[A(z) zbar_zetabar] with w holomorphic, and for
sup||A|| <= 1/2 the map is a contraction, so plain Picard iteration from the
seed converges; no Newton machinery is warranted at these sizes.

Residuals are always measured over the interior nodes |zeta| <= 0.9*radius:
the one-sided rim stencils are first-order accurate and would otherwise
dominate every convergence figure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cauchy_green import CGOperator
from .grid_disc import GridDisc, GridFunction, interpolate, wirtinger_d, wirtinger_dbar

INTERIOR_FRAC = 0.9


class ChartEscapeError(RuntimeError):
    """Iterates left the chart on which the structure field is defined."""


class ConvergenceError(RuntimeError):
    """Picard iteration stalled above the requested residual."""


@dataclass
class DiscMap:
    """Grid-sampled map D -> C^n with a cached J-holomorphy residual."""

    grid: GridDisc
    values: np.ndarray  # (M, n) complex
    residual: float | None = None
    iterations: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim != 2 or self.values.shape[0] != len(self.grid.nodes):
            raise ValueError("values must be (num_nodes, n)")

    @property
    def n(self):
        return self.values.shape[1]

    def component(self, k):
        return GridFunction(self.grid, self.values[:, k])

    def d_values(self):
        return np.column_stack(
            [wirtinger_d(self.component(k)).values for k in range(self.n)])

    def dbar_values(self):
        return np.column_stack(
            [wirtinger_dbar(self.component(k)).values for k in range(self.n)])

    def at_origin(self):
        return self.values[self.grid.origin_index()].copy()

    def __call__(self, zetas):
        """Bilinear interpolation, one column per component."""
        zetas_arr = np.atleast_1d(np.asarray(zetas, dtype=complex))
        out = np.column_stack(
            [interpolate(self.component(k), zetas_arr) for k in range(self.n)])
        return out if np.ndim(zetas) else out[0]

    def residual_against(self, afield, frac=INTERIOR_FRAC):
        """Recompute sup |z_zetabar - A(z) zbar_zetabar| over interior nodes."""
        res = _holomorphy_defect(self, afield)
        mask = self.grid.interior_mask(frac)
        return float(np.abs(res[mask]).max())


def _holomorphy_defect(disc, afield):
    dz = disc.d_values()
    dbz = disc.dbar_values()
    mats = afield.eval_batch(disc.values)
    return dbz - np.einsum("ikj,ij->ik", mats, np.conj(dz))


def _structure_term(disc, afield):
    """A(z) zbar_zetabar at every node: the integrand handed to T."""
    dz = disc.d_values()
    mats = afield.eval_batch(disc.values)
    return np.einsum("ikj,ij->ik", mats, np.conj(dz))


def as_disc_map(grid, w):
    """Coerce a seed (DiscMap, callable of zeta, or (M, n) array) to DiscMap."""
    if isinstance(w, DiscMap):
        if w.grid is not grid:
            raise ValueError("seed lives on a different grid")
        return w
    if callable(w):
        vals = np.asarray(w(grid.nodes), dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None]
        return DiscMap(grid, vals)
    vals = np.asarray(w, dtype=complex)
    return DiscMap(grid, vals if vals.ndim == 2 else vals[:, None])


def affine_disc(grid, center, direction, scale=1.0):
    """Seed zeta -> center + scale * zeta * direction."""
    center = np.atleast_1d(np.asarray(center, dtype=complex))
    direction = np.atleast_1d(np.asarray(direction, dtype=complex))
    vals = center[None, :] + scale * grid.nodes[:, None] * direction[None, :]
    return DiscMap(grid, vals)


def psi_j(z, afield, op=None):
    """The map z -> w = z - T[A(z) zbar_zetabar] whose fixed points over a
    holomorphic w are the J-holomorphic discs."""
    if op is None:
        op = CGOperator(z.grid)
    g = _structure_term(z, afield)
    w = z.values - op.transform_columns(g)
    return DiscMap(z.grid, w)


def solve_disc(w, afield, op=None, tol=1e-8, max_iter=50):
    """Picard-iterate z <- w + T[A(z) zbar_zetabar] until the interior
    J-holomorphy residual drops to tol.

    The seed must be discretely holomorphic (interior dbar residual below
    tol/10) -- in practice an affine or polynomial-in-zeta map.  Failure
    modes are distinct: ChartEscapeError when iterates leave the structure
    chart, ConvergenceError when the residual will not fall.
    """
    grid = w.grid if isinstance(w, DiscMap) else op.grid if op else None
    if grid is None:
        raise ValueError("pass a DiscMap seed or an operator carrying a grid")
    w = as_disc_map(grid, w)
    if op is None:
        op = CGOperator(grid)
    elif op.grid is not grid:
        raise ValueError("operator grid does not match the seed grid")
    mask = grid.interior_mask(INTERIOR_FRAC)

    seed_dbar = float(np.abs(w.dbar_values()[mask]).max())
    scale = max(1.0, float(np.abs(w.values).max()))
    if seed_dbar > tol / 10 * scale:
        raise ValueError(
            f"seed is not discretely holomorphic: dbar residual {seed_dbar:.2e}")

    sup_a = afield.sampled_sup_norm()
    if sup_a > 0.5:
        raise ValueError(f"sampled sup||A|| = {sup_a:.3f} exceeds 1/2")

    z = DiscMap(grid, w.values.copy())
    for it in range(1, max_iter + 1):
        if not afield.contains(z.values):
            raise ChartEscapeError(f"iterate left the chart at step {it}")
        g = _structure_term(z, afield)
        if np.abs(g).max() == 0.0:
            z_new_vals = w.values  # A contributes nothing; seed is the disc
        else:
            z_new_vals = w.values + op.transform_columns(g)
        change = float(np.abs(z_new_vals - z.values).max())
        z = DiscMap(grid, z_new_vals, iterations=it)
        res = float(np.abs(_holomorphy_defect(z, afield)[mask]).max())
        z.residual = res
        if res <= tol:
            return z
        if change <= 1e-14 * scale:
            raise ConvergenceError(
                f"iteration stalled at residual {res:.2e} > tol {tol:.2e}")
    raise ConvergenceError(
        f"residual {z.residual:.2e} > tol {tol:.2e} after {max_iter} iterations")


@dataclass
class NWDisc:
    """Centered disc through p in direction v, with diagnostics."""

    disc: DiscMap
    center_error: float
    tangent: np.ndarray
    shifts: int


def nijenhuis_woolf_disc(p, v, afield, op, scale=1.0, tol=1e-8, max_shifts=5):
    """Small J-holomorphic disc with z(0) = p, tangent along v.

    Solves from the affine seed p + scale*zeta*v and re-centers by shifting
    the seed until the origin value matches p; reports the achieved tangent
    rather than enforcing it (the first-order correction only moves the
    center, so a couple of shifts suffice).
    """
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    grid = op.grid
    seed = affine_disc(grid, p, v, scale)
    disc = solve_disc(seed, afield, op=op, tol=tol)
    shifts = 0
    offset = disc.at_origin() - p
    ref = max(1.0, float(np.abs(p).max()))
    while np.abs(offset).max() > 1e-12 * ref and shifts < max_shifts:
        seed = DiscMap(grid, seed.values - offset[None, :])
        disc = solve_disc(seed, afield, op=op, tol=tol)
        offset = disc.at_origin() - p
        shifts += 1
    tangent = disc.d_values()[grid.origin_index()]
    return NWDisc(disc, float(np.abs(offset).max()), tangent, shifts)


def _gauss_newton_param(disc, target, start=0j, tol=1e-10, max_iter=40):
    """Find zeta in the disc with disc(zeta) ~= target (least squares in the
    real/imaginary parts, finite-difference Jacobian)."""
    zeta = complex(start)
    lim = 0.85 * disc.grid.radius
    step = max(1e-7 * disc.grid.radius, 1e-12)

    def resid(z):
        return (disc(z) - target).view(float)

    r = resid(zeta)
    for _ in range(max_iter):
        if np.linalg.norm(r) <= tol:
            break
        col_a = (resid(zeta + step) - resid(zeta - step)) / (2 * step)
        col_b = (resid(zeta + 1j * step) - resid(zeta - 1j * step)) / (2 * step)
        J = np.column_stack([col_a, col_b])
        delta, *_ = np.linalg.lstsq(J, -r, rcond=None)
        # damped update, clamped inside the interpolable zone
        lam = 1.0
        for _ in range(10):
            cand = zeta + lam * (delta[0] + 1j * delta[1])
            if abs(cand) > lim:
                cand *= lim / abs(cand)
            r_new = resid(cand)
            if np.linalg.norm(r_new) < np.linalg.norm(r) or lam < 1e-4:
                zeta, r = cand, r_new
                break
            lam /= 2
        if np.linalg.norm(lam * delta) < 1e-15:
            break
    return zeta, float(np.linalg.norm(r))


@dataclass
class TransverseFamily:
    """Family of discs through gamma1(t) transverse to a tangent curve pair.

    zeta2[k] is the disc parameter hitting gamma2(ts[k]); ratios[k] is
    |zeta2| / (1 - t), the quantity whose decay certifies tangency.  rho[k]
    is the largest sampled sub-disc radius staying inside the domain (grid
    radius when no domain is supplied).
    """

    ts: np.ndarray
    discs: list
    zeta2: np.ndarray
    gn_errors: np.ndarray
    ratios: np.ndarray
    rho: np.ndarray
    flag: str = ""


def transverse_family(gamma1, gamma2, afield, ts, op, domain=None, scale=1.0,
                      gn_tol=1e-10, tol=1e-8):
    """Build a family of discs centered on gamma1(t) and passing through
    gamma2(t), then locate gamma2(t)'s parameter zeta2(t) on each disc.

    The discs keep a fixed spatial scale, so for curves with second-order
    contact |zeta2(t)| ~ |gamma2(t) - gamma1(t)| / scale shrinks faster than
    (1 - t).  The two curves must end at the same point; tangency itself is
    *measured*, not assumed: the flag records whether |zeta2|/(1-t) decays.
    """
    ts = np.asarray(ts, dtype=float)
    p1 = np.atleast_1d(np.asarray(gamma1(1.0), dtype=complex))
    p2 = np.atleast_1d(np.asarray(gamma2(1.0), dtype=complex))
    if np.abs(p1 - p2).max() > 1e-10 * max(1.0, np.abs(p1).max()):
        raise ValueError("curves do not share an endpoint")
    eps = 1e-6
    tau = (p1 - np.atleast_1d(np.asarray(gamma1(1.0 - eps), dtype=complex))) / eps
    fallback = _transverse_unit(tau)

    grid = op.grid
    discs, z2s, errs, rhos = [], [], [], []
    for t in ts:
        center = np.atleast_1d(np.asarray(gamma1(t), dtype=complex))
        chord = np.atleast_1d(np.asarray(gamma2(t), dtype=complex)) - center
        nc = np.linalg.norm(chord)
        if nc > 1e-13 * max(1.0, np.abs(center).max()):
            direction = chord / nc
            fallback = direction
        else:
            direction = fallback  # coincident curves: any section will do
        seed = affine_disc(grid, center, direction, scale)
        disc = solve_disc(seed, afield, op=op, tol=tol)
        # re-center so the disc passes through gamma1(t) exactly
        for _ in range(5):
            offset = disc.at_origin() - center
            if np.abs(offset).max() <= 1e-13 * max(1.0, np.abs(center).max()):
                break
            seed = DiscMap(grid, seed.values - offset[None, :])
            disc = solve_disc(seed, afield, op=op, tol=tol)
        target = np.atleast_1d(np.asarray(gamma2(t), dtype=complex))
        z2, err = _gauss_newton_param(disc, target, tol=gn_tol)
        discs.append(disc)
        z2s.append(z2)
        errs.append(err)
        rhos.append(_inner_radius(disc, domain))
    z2s = np.asarray(z2s)
    ratios = np.abs(z2s) / (1.0 - ts)
    flag = "tangent" if ratios[-1] <= max(0.1, 0.5 * ratios[0]) else "not-tangent"
    return TransverseFamily(ts, discs, z2s, np.asarray(errs), ratios,
                            np.asarray(rhos), flag)


def _transverse_unit(tau):
    """A unit vector far from the span of tau (used when the two curves
    coincide and no chord direction exists)."""
    tau = np.atleast_1d(np.asarray(tau, dtype=complex))
    n = tau.size
    tau = tau / max(np.linalg.norm(tau), 1e-300)
    overlaps = [abs(np.vdot(tau, np.eye(n)[k])) for k in range(n)]
    e = np.eye(n, dtype=complex)[int(np.argmin(overlaps))]
    e = e - np.vdot(tau, e) * tau
    return e / np.linalg.norm(e)


def _inner_radius(disc, domain):
    """Largest tested radius r with disc(|zeta| <= r) inside the domain."""
    if domain is None:
        return disc.grid.radius
    r = INTERIOR_FRAC * disc.grid.radius
    absz = np.abs(disc.grid.nodes)
    for _ in range(60):
        sel = absz <= r
        if sel.any() and np.all(domain.rho(disc.values[sel]) < 0):
            return r
        r *= 0.9
    return 0.0
