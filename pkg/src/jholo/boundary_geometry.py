"""Boundary geometry of domains given by a defining function.

Conventions.  A domain is Omega = {rho < 0} with drho != 0 on the boundary.
For a boundary point p and interior point q:

    delta_p(q) = min(dist(q, T_p(bOmega)), dist(q, bOmega)),
    d_p(q)     = dist(q, H_p(bOmega)),

where T_p is the full (2n-1-dimensional affine) tangent and H_p = T_p
intersect J T_p is the holomorphic tangent (2n-2 real dimensions).  Approach
regions at p:

    cone:        |q - p| < alpha * delta_p(q),              alpha > 1,
    admissible:  d_p(q) < (1 + alpha) * delta_p(q)   and
                 |q - p|^2 < alpha * delta_p(q)^(1+eps),    eps > 0.

Distances to the boundary are first-order |rho|/|grad rho| estimates refined
by projected-gradient steps; delta_p always goes through that computation,
never the |rho| shortcut, so curvature effects are captured.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .almost_complex import (AffineChart, deinterleave, interleave, j_from_a,
                             j_std, to_real)

_FD_STEP = 1e-6


@dataclass
class DefiningDomain:
    """Domain {rho < 0} in C^n with optional analytic gradients.

    rho must accept (m, n) complex batches.  grad returns the real gradient
    in interleaved coordinates, (m, 2n); when omitted it is computed by
    central differences.  rho_z / rho_zbar are the complex gradient rows,
    available for the built-in domains so test functions can differentiate
    symbolically.  a_field carries the ambient structure (None = standard).
    """

    n: int
    rho: object
    grad: object = None
    rho_z: object = None
    rho_zbar: object = None
    a_field: object = None
    name: str = ""

    def gradient(self, Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        if self.grad is not None:
            return np.asarray(self.grad(Z), dtype=float)
        G = np.empty((Z.shape[0], 2 * self.n))
        X = interleave(Z)
        for a in range(2 * self.n):
            E = np.zeros(2 * self.n)
            E[a] = _FD_STEP
            G[:, a] = (self.rho(deinterleave(X + E)) - self.rho(deinterleave(X - E))) / (2 * _FD_STEP)
        return G

    def structure_at(self, p):
        if self.a_field is None:
            return j_std(self.n)
        return j_from_a(self.a_field.eval(np.asarray(p, dtype=complex)))

    def inward_normal(self, p):
        g = self.gradient(p)[0]
        return -g / np.linalg.norm(g)


def halfspace(n, a_field=None):
    """Omega = {y_n < 0}; the normalized flat model."""
    en = np.zeros(n, dtype=complex)
    en[n - 1] = 1.0

    def rho(Z):
        return np.atleast_2d(np.asarray(Z, dtype=complex))[:, n - 1].imag

    def grad(Z):
        Z = np.atleast_2d(Z)
        G = np.zeros((Z.shape[0], 2 * n))
        G[:, 2 * n - 1] = 1.0
        return G

    def rho_z(Z):
        Z = np.atleast_2d(Z)
        return np.broadcast_to(-0.5j * en, (Z.shape[0], n)).copy()

    def rho_zbar(Z):
        Z = np.atleast_2d(Z)
        return np.broadcast_to(0.5j * en, (Z.shape[0], n)).copy()

    return DefiningDomain(n, rho, grad, rho_z, rho_zbar, a_field, "halfspace")


def ball(n, a_field=None):
    """Omega = {|z| < 1}."""

    def rho(Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        return np.sum(np.abs(Z) ** 2, axis=1) - 1.0

    def grad(Z):
        return 2.0 * interleave(np.atleast_2d(Z))

    def rho_z(Z):
        return np.conj(np.atleast_2d(np.asarray(Z, dtype=complex)))

    def rho_zbar(Z):
        return np.atleast_2d(np.asarray(Z, dtype=complex)).copy()

    return DefiningDomain(n, rho, grad, rho_z, rho_zbar, a_field, "ball")


def poly_domain(n, a, b, c, a_field=None):
    """rho = a*y_n + b*|z|^2 + c; covers tilted/curved mixtures of the
    built-ins (the CLI's custom-poly domain)."""
    en = np.zeros(n, dtype=complex)
    en[n - 1] = 1.0

    def rho(Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        return a * Z[:, n - 1].imag + b * np.sum(np.abs(Z) ** 2, axis=1) + c

    def grad(Z):
        Z = np.atleast_2d(Z)
        G = 2.0 * b * interleave(Z)
        G[:, 2 * n - 1] += a
        return G

    def rho_z(Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        return -0.5j * a * en[None, :] + b * np.conj(Z)

    def rho_zbar(Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        return 0.5j * a * en[None, :] + b * Z

    return DefiningDomain(n, rho, grad, rho_z, rho_zbar, a_field,
                          f"poly({a},{b},{c})")


# --------------------------------------------------------------------------
# Distances and regions


def project_boundary(D, Q, iters=15, tol=1e-12):
    """Send each query to a nearby point of {rho = 0} by projected-gradient
    (Newton) steps along grad rho."""
    Q = np.atleast_2d(np.asarray(Q, dtype=complex))
    X = interleave(Q).copy()
    scale = max(1.0, float(np.abs(X).max()))
    for _ in range(iters):
        Z = deinterleave(X)
        r = np.asarray(D.rho(Z), dtype=float)
        if np.all(np.abs(r) <= tol * scale):
            break
        G = D.gradient(Z)
        gg = np.sum(G * G, axis=1)
        gg = np.where(gg > 0, gg, 1.0)
        X -= (r / gg)[:, None] * G
    return deinterleave(X)


def dist_boundary(D, Q, iters=15, tol=1e-12):
    """Distance to {rho = 0} via the Newton projection; falls back to the
    first-order |rho|/|grad rho| estimate where the projection stalls."""
    Q = np.atleast_2d(np.asarray(Q, dtype=complex))
    P = project_boundary(D, Q, iters=iters, tol=tol)
    r = np.asarray(D.rho(P), dtype=float)
    d = np.linalg.norm(interleave(Q) - interleave(P), axis=1)
    scale = max(1.0, float(np.abs(Q).max()))
    stalled = np.abs(r) > 1e-8 * scale
    if stalled.any():
        G = D.gradient(Q[stalled])
        d[stalled] = np.abs(np.asarray(D.rho(Q[stalled]), dtype=float)) \
            / np.linalg.norm(G, axis=1)
    return d


def delta_p(D, p, Q):
    """min(distance to the affine tangent plane at p, distance to bOmega)."""
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    rp = float(np.asarray(D.rho(p[None, :]))[0])
    if abs(rp) > 1e-8 * max(1.0, float(np.abs(p).max())):
        raise ValueError(f"anchor is not a boundary point: rho(p) = {rp:.3e}")
    Q = np.atleast_2d(np.asarray(Q, dtype=complex))
    g = D.gradient(p)[0]
    diff = interleave(Q - p)
    d_tan = np.abs(diff @ g) / np.linalg.norm(g)
    return np.minimum(d_tan, dist_boundary(D, Q))


def holomorphic_tangent(D, p):
    """Orthonormal frame (columns) of H_p = ker drho ^ ker (drho o J)."""
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    g = D.gradient(p)[0]
    J = D.structure_at(p)
    rows = np.vstack([g, J.T @ g])
    _, s, Vt = np.linalg.svd(rows)
    if s[1] <= 1e-10 * s[0]:
        raise ValueError("drho and drho o J are parallel: H_p degenerates")
    return Vt[2:].T


def d_p(D, p, Q):
    """Distance to the affine holomorphic tangent H_p(bOmega) through p."""
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    Q = np.atleast_2d(np.asarray(Q, dtype=complex))
    F = holomorphic_tangent(D, p)
    diff = interleave(Q - p)
    resid = diff - (diff @ F) @ F.T
    return np.linalg.norm(resid, axis=1)


def in_cone(D, p, Q, alpha):
    """Nontangential cone membership; requires aperture alpha > 1."""
    if alpha <= 1.0:
        raise ValueError(f"cone aperture must exceed 1, got {alpha}")
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    Q = np.atleast_2d(np.asarray(Q, dtype=complex))
    dist_pq = np.linalg.norm(interleave(Q - p), axis=1)
    return dist_pq < alpha * delta_p(D, p, Q)


def in_admissible(D, p, Q, alpha, eps):
    """Admissible-region membership (both defining inequalities)."""
    if alpha <= 0 or eps <= 0:
        raise ValueError("need alpha > 0 and eps > 0")
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    Q = np.atleast_2d(np.asarray(Q, dtype=complex))
    dd = delta_p(D, p, Q)
    cond1 = d_p(D, p, Q) < (1 + alpha) * dd
    dist_pq = np.linalg.norm(interleave(Q - p), axis=1)
    cond2 = dist_pq**2 < alpha * dd ** (1 + eps)
    return cond1 & cond2


def normal_admissible_depth(alpha, eps):
    """Depth s0 > 0 below which inward-normal points of the flat model lie
    in A_{alpha,eps}(0): s^2 < alpha s^(1+eps) iff s < alpha^(1/(1-eps))."""
    if not 0 < eps < 1:
        raise ValueError("need 0 < eps < 1 for a finite threshold")
    return alpha ** (1.0 / (1.0 - eps))


@dataclass
class ApproachRegion:
    """Cone or admissible region anchored at a boundary point."""

    kind: str  # "cone" | "admissible"
    p: np.ndarray
    alpha: float
    eps: float | None = None

    def contains(self, D, Q):
        if self.kind == "cone":
            return in_cone(D, self.p, Q, self.alpha)
        if self.kind == "admissible":
            return in_admissible(D, self.p, Q, self.alpha, self.eps)
        raise ValueError(f"unknown region kind {self.kind!r}")


# --------------------------------------------------------------------------
# Curves and patches


@dataclass
class AdmissibleCurve:
    """C^1 curve gamma: [0,1] -> closure(Omega) ending on the boundary."""

    gamma: object
    dgamma: object = None

    def __call__(self, t):
        return np.asarray(self.gamma(t), dtype=complex)

    def derivative(self, t, h=1e-6):
        if self.dgamma is not None:
            return np.asarray(self.dgamma(t), dtype=complex)
        t0, t1 = max(0.0, t - h), min(1.0, t + h)
        return (self(t1) - self(t0)) / (t1 - t0)


def is_admissible_curve(D, curve, samples=64):
    """Sampled checks: interior for t < 1, boundary endpoint, bounded C^1
    variation, transversality of the end tangent.  Returns (ok, diagnostics)."""
    if not isinstance(curve, AdmissibleCurve):
        curve = AdmissibleCurve(curve)
    notes = []
    ts = np.linspace(0.0, 1.0, samples)
    pts = np.stack([curve(t) for t in ts])
    vals = np.asarray(D.rho(pts), dtype=float)
    if not np.all(vals[:-1] < 0):
        notes.append("curve leaves the domain before t = 1")
    if abs(vals[-1]) > 1e-6:
        notes.append(f"endpoint misses the boundary: rho = {vals[-1]:.2e}")
    ders = np.stack([curve.derivative(t) for t in ts])
    if not np.all(np.isfinite(ders)):
        notes.append("derivative is not finite somewhere")
    else:
        mags = np.linalg.norm(np.atleast_2d(ders), axis=1)
        jumps = np.abs(np.diff(mags))
        if mags.max() == 0 or jumps.max() > 0.5 * max(mags.max(), 1e-12):
            notes.append("derivative jumps too much for a C^1 sampling")
    g = D.gradient(curve(1.0))[0]
    dp = interleave(np.atleast_2d(curve.derivative(1.0)))[0]
    denom = np.linalg.norm(g) * max(np.linalg.norm(dp), 1e-300)
    if abs(np.dot(g, dp)) < 1e-6 * denom:
        notes.append("end tangent is not transverse to the boundary")
    return len(notes) == 0, notes


@dataclass
class SubmanifoldPatch:
    """Parametrized boundary patch u in box -> bOmega, u in R^k."""

    embed: object
    k: int
    lo: np.ndarray
    hi: np.ndarray
    name: str = ""

    def points(self, U):
        return np.asarray(self.embed(np.atleast_2d(np.asarray(U, dtype=float))),
                          dtype=complex)

    def frame(self, u, h=1e-6):
        """Columns d(embed)/du_j in interleaved real coordinates, (2n, k)."""
        u = np.asarray(u, dtype=float)
        cols = []
        for j in range(self.k):
            e = np.zeros(self.k)
            e[j] = h
            cols.append(interleave(self.points(u + e) - self.points(u - e))[0] / (2 * h))
        return np.column_stack(cols)


def is_generic(patch, domain=None, samples=4, tol=1e-8):
    """Check that the complex span of the patch tangent fills C^n at sampled
    parameters: rank [frame, J frame] = 2n.  Returns (bool, rank margins)."""
    axes = [np.linspace(lo, hi, samples) for lo, hi in zip(patch.lo, patch.hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    us = np.stack([m.ravel() for m in mesh], axis=-1)
    margins = []
    ok = True
    for u in us:
        z = patch.points(u)[0]
        J = domain.structure_at(z) if domain is not None else j_std(len(z))
        T = patch.frame(u)
        G = np.column_stack([T, J @ T])
        s = np.linalg.svd(G, compute_uv=False)
        margin = s[min(G.shape) - 1] / s[0] if s[0] > 0 else 0.0
        full = G.shape[1] >= G.shape[0] and margin > tol
        margins.append(margin)
        ok = ok and full
    return ok, np.asarray(margins)


# --------------------------------------------------------------------------
# Filling discs (normalized model at p = 0)


@dataclass
class FillingDisc:
    """Affine disc zeta -> (zeta * v', z_n0) with certified radii.

    r is the admissible-region radius (every sampled point of the disc of
    radius r lies in A_{alpha,eps}(0)); rho0 is a radius whose image stays
    in Omega.
    """

    base: np.ndarray
    direction: np.ndarray
    r: float
    rho0: float
    alpha: float
    eps: float

    def __call__(self, zetas):
        zetas_arr = np.atleast_1d(np.asarray(zetas, dtype=complex))
        pts = self.base[None, :] + zetas_arr[:, None] * self.direction[None, :]
        return pts if np.ndim(zetas) else pts[0]


def _check_normalized(D, tol=1e-6):
    g = D.gradient(np.zeros(D.n, dtype=complex))[0]
    ng = np.linalg.norm(g)
    target = np.zeros(2 * D.n)
    target[-1] = 1.0
    if ng < 1e-12 or np.linalg.norm(g / ng - target) > tol:
        raise ValueError("domain is not normalized: grad rho(0) is not e_{y_n}"
                         " (run normalize_domain first)")


def filling_discs(D, z_n0, v, alpha, eps, margin=0.02, rings=(1.0, 0.75, 0.5, 0.25),
                  nang=32, max_shrink=60):
    """Affine disc through (0', z_n0) in a tangential direction, shrunk until
    all sampled points live in the admissible region A_{alpha,eps}(0).

    The starting radius is r = sqrt(alpha * |Im z_n0|^(1+eps)) minus a
    safety margin, the scale suggested by the second admissibility
    inequality on the model.  Membership is then verified with
    in_admissible exactly as defined -- not an |rho| shortcut -- and the
    radius backs off by 10% until every sample passes.
    """
    _check_normalized(D)
    n = D.n
    v = np.asarray(v, dtype=complex)
    if abs(v[n - 1]) > 1e-12:
        raise ValueError("direction must be tangential: last component zero")
    nv = np.linalg.norm(v)
    if nv == 0:
        raise ValueError("zero direction")
    v = v / nv
    base = np.zeros(n, dtype=complex)
    base[n - 1] = z_n0
    rho_b = float(np.asarray(D.rho(base[None, :]))[0])
    if rho_b >= 0:
        raise ValueError("base point is not inside the domain")
    if abs(z_n0) >= (1 + alpha) * abs(rho_b):
        raise ValueError("base point violates the first admissibility inequality")

    y_n0 = complex(z_n0).imag
    if y_n0 == 0:
        raise ValueError("base point must sit off the tangent plane (Im z_n0 != 0)")
    r = np.sqrt(alpha * abs(y_n0) ** (1 + eps)) * (1 - margin)
    origin = np.zeros(n, dtype=complex)
    angles = np.exp(2j * np.pi * np.arange(nang) / nang)
    disc = FillingDisc(base, v, r, 0.0, alpha, eps)
    for _ in range(max_shrink):
        zs = np.concatenate([disc.r * f * angles for f in rings])
        if np.all(in_admissible(D, origin, disc(zs), alpha, eps)):
            break
        disc.r *= 0.9
    else:
        raise ValueError("admissible radius collapsed during shrinking")

    rho0 = abs(rho_b)
    for _ in range(max_shrink):
        zs = np.concatenate([rho0 * f * angles for f in rings])
        if np.all(np.asarray(D.rho(disc(zs))) < 0):
            break
        rho0 *= 0.9
    else:
        raise ValueError("inner radius collapsed during shrinking")
    disc.rho0 = rho0
    return disc


# --------------------------------------------------------------------------
# Normalization


def normalize_domain(D, p):
    """Affine unitary change of coordinates placing p at 0 with
    rho = y_n + o(|z|) (unit gradient along the y_n axis).

    Returns (chart, normalized domain).  The linear factor is unitary, so
    the standard structure is preserved; a structure field on the original
    domain is pushed forward through the same map.
    """
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    n = D.n
    g = D.gradient(p)[0]
    gn = np.linalg.norm(g)
    if gn == 0:
        raise ValueError("vanishing gradient at p")
    nu = deinterleave(g / gn)

    c = nu[n - 1]
    phi = c / abs(c) if abs(c) > 1e-14 else 1.0
    w = nu - phi * np.eye(n, dtype=complex)[n - 1]
    if np.linalg.norm(w) < 1e-14:
        H = np.eye(n, dtype=complex)
    else:
        H = np.eye(n, dtype=complex) - 2.0 * np.outer(w, np.conj(w)) / np.vdot(w, w)
    U = H.copy()
    U[n - 1, :] *= 1j / phi  # rotate the last coordinate so nu maps to i*e_n
    S = to_real(U, np.zeros_like(U))
    chart = AffineChart(p, S)

    scale = 1.0 / gn

    def rho_t(T):
        return scale * np.asarray(D.rho(chart.backward(np.atleast_2d(T))))

    def grad_t(T):
        G = D.gradient(chart.backward(np.atleast_2d(T)))
        return scale * G @ S.T  # S orthogonal: S^{-T} = S

    rho_z_t = rho_zbar_t = None
    if D.rho_z is not None:
        Udag = np.conj(U.T)

        def rho_z_t(T):
            return scale * np.asarray(D.rho_z(chart.backward(np.atleast_2d(T)))) @ Udag

        def rho_zbar_t(T):
            return scale * np.asarray(D.rho_zbar(chart.backward(np.atleast_2d(T)))) @ np.conj(Udag)

    a_field_t = None
    if D.a_field is not None:
        a_field_t = chart.push_a_field(D.a_field, D.a_field.chart_lo,
                                       D.a_field.chart_hi)

    ND = DefiningDomain(n, rho_t, grad_t, rho_z_t, rho_zbar_t, a_field_t,
                        name=f"normalized[{D.name}]")
    _check_normalized(ND)
    return chart, ND
