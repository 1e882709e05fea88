"""Boundary-limit experiments for asymptotically holomorphic functions.

The pipeline mirrors the analytic chain this package exists to probe:

  1. estimate_subsolution_profile -- fit ||dbar_J F|| ~ C dist^(-1/2+tau)
     near a boundary point; tau > 0 is the "asymptotically holomorphic"
     gate for everything downstream.
  2. schwarz_bound_check / schwarz_battery -- the one-variable Hoelder
     estimate |f(t1)-f(t2)| <= C (||f||_inf + rho ||f_dbar||_{L^p}) *
     (|t1-t2|/rho)^(1-2/p) with its scale invariance in rho at fixed
     r = alpha/rho.
  3. limit_along_curve / admissible_limit -- Cauchy-tail limit detection
     along a transverse curve and through admissible regions sampled in
     dyadic delta_p-shells.
  4. chirka_lindelof_experiment -- one curve limit upgraded to all
     admissible limits, with the filling-disc oscillation ladder replaying
     the proof mechanism.
  5. tangent_curves_experiment -- equal limits along curves tangent to
     each other, via the transverse disc family.
  6. fatou_survey -- admissible limits at sampled points of a generic
     boundary submanifold.

Numerical "limit" means a Cauchy-tail criterion over dyadic scales: the
verdict is convergent only when the tail widths (diameter of all values at
the current scale and beyond) fall below tolerance over the last three
scales.  Tail widths are nonincreasing by construction, so that cutoff is
exactly "the last three scales are below tol".  No finite computation
certifies a true limit; reports always retain the raw shell tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .almost_complex import deinterleave, interleave
from .boundary_geometry import (AdmissibleCurve, delta_p, dist_boundary,
                                filling_discs, holomorphic_tangent,
                                in_admissible, is_admissible_curve, is_generic,
                                normalize_domain, project_boundary)
from .cauchy_green import CGOperator
from .disc_solver import affine_disc, solve_disc, transverse_family
from .grid_disc import make_grid
from .testfuncs import random_disc_polynomial

P_DEFAULT = 4.0


# --------------------------------------------------------------------------
# Subsolution profiling


@dataclass
class SubsolutionProfile:
    """Fitted boundary-blowup profile ||dbar_J F|| ~ C * dist^(-1/2+tau)."""

    C: float
    tau: float
    slope: float
    stderr: float
    table: np.ndarray  # rows (dist, ||dbar_J F||)
    verdict: str  # "subsolution" | "not-subsolution" | "holomorphic"

    @property
    def passed(self):
        return self.verdict in ("subsolution", "holomorphic")


def estimate_subsolution_profile(F, D, p, afield=None, samples=None, s0=0.05,
                                 n_depths=16, n_burn=4, fan=6, offset=0.05,
                                 seed=0):
    """Fit the blowup rate of ||dbar_J F|| against boundary distance.

    Default sampling: a fan of boundary anchors at fixed tangential offsets
    from p (plus p itself), each pushed inward along its own normal to
    dyadic depths s0 * 2^-j.  The fixed offsets keep the envelope-realizing
    directions in view at every depth; per depth the maximum over the fan
    is fitted, log-log.  The first n_burn depths are excluded from the fit
    (the envelope's leading term only takes over once the depth drops below
    the offset scale -- shallow samples would flatten the measured slope),
    but stay in the table.  An explicit interior point cloud can be
    supplied via samples instead, in which case every point contributes a
    row and no burn-in applies.  tau = 1/2 + slope; C is the
    95th-percentile envelope constant.
    """
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    if samples is not None:
        Q = np.atleast_2d(np.asarray(samples, dtype=complex))
        if np.any(np.asarray(D.rho(Q), dtype=float) >= 0):
            raise ValueError("sample cloud must lie inside the domain")
        mags = np.linalg.norm(F.dbar_row(Q, afield), axis=1)
        dists = dist_boundary(D, Q)
    else:
        rng = np.random.default_rng(seed)
        H = holomorphic_tangent(D, p)
        offs = [np.zeros_like(p)]
        for _ in range(fan):
            c = rng.standard_normal(H.shape[1])
            w = H @ (c / np.linalg.norm(c))
            offs.append(offset * deinterleave(w))
        anchors = project_boundary(D, p[None, :] + np.stack(offs))
        G = D.gradient(anchors)
        nu = -G / np.linalg.norm(G, axis=1, keepdims=True)
        nu_c = deinterleave(nu)

        depths = s0 * 0.5 ** np.arange(n_depths)
        dists, mags = [], []
        for s in depths:
            Q = anchors + s * nu_c
            inside = np.asarray(D.rho(Q), dtype=float) < 0
            if not inside.any():
                continue
            rows = F.dbar_row(Q[inside], afield)
            mag = np.linalg.norm(rows, axis=1)
            d = dist_boundary(D, Q[inside])
            dists.append(np.median(d))
            mags.append(mag.max())
        dists = np.asarray(dists)
        mags = np.asarray(mags)
    if len(dists) < 8 or dists.max() / dists.min() < 2.0**9:
        raise ValueError("distances must span at least 3 dyadic decades")
    table = np.column_stack([dists, mags])

    if mags.max() < 1e-250:
        return SubsolutionProfile(0.0, np.inf, 0.0, 0.0, table, "holomorphic")

    if samples is None and len(dists) > n_burn + 6:
        dists, mags = dists[n_burn:], mags[n_burn:]
    x = np.log(dists)
    y = np.log(np.maximum(mags, 1e-300))
    A = np.column_stack([x, np.ones_like(x)])
    coef, res, _, _ = np.linalg.lstsq(A, y, rcond=None)
    slope, intercept = coef
    dof = max(len(x) - 2, 1)
    sigma2 = (res[0] / dof) if res.size else 0.0
    sxx = np.sum((x - x.mean()) ** 2)
    stderr = float(np.sqrt(sigma2 / sxx)) if sxx > 0 else 0.0
    tau = 0.5 + slope
    C = float(np.exp(np.quantile(y - slope * x, 0.95)))
    verdict = "subsolution" if tau > -stderr else "not-subsolution"
    return SubsolutionProfile(C, float(tau), float(slope), stderr, table,
                              verdict)


# --------------------------------------------------------------------------
# Schwarz-type quotients


def _polar_grid(rho, nr=96, ntheta=96):
    r = (np.arange(nr) + 0.5) * (rho / nr)
    th = (np.arange(ntheta) + 0.5) * (2 * np.pi / ntheta)
    R, TH = np.meshgrid(r, th, indexing="ij")
    pts = (R * np.exp(1j * TH)).ravel()
    w = (R * (rho / nr) * (2 * np.pi / ntheta)).ravel()
    return pts, w


def disc_sup_norm(fn, rho, nr=64, ntheta=64):
    pts, _ = _polar_grid(rho, nr, ntheta)
    rim = rho * np.exp(2j * np.pi * np.arange(4 * ntheta) / (4 * ntheta))
    return float(np.abs(np.concatenate([fn(pts), fn(rim)])).max())


def disc_lp_norm(fn, rho, p, nr=96, ntheta=96):
    pts, w = _polar_grid(rho, nr, ntheta)
    return float(np.sum(w * np.abs(fn(pts)) ** p) ** (1.0 / p))


def schwarz_quotient(fn, fn_dbar, rho, tau1, tau2, p=P_DEFAULT):
    """Q = |f(t1)-f(t2)| / ((||f||_inf + rho ||f_dbar||_{L^p(rho D)}) *
    (|t1-t2|/rho)^(1-2/p)); finite sup over pairs witnesses the Hoelder
    bound, and at fixed r = alpha/rho the sup depends on r only."""
    expo = 1.0 - 2.0 / p
    num = abs(fn(np.array([tau1]))[0] - fn(np.array([tau2]))[0])
    den = (disc_sup_norm(fn, rho) + rho * disc_lp_norm(fn_dbar, rho, p)) \
        * (abs(tau1 - tau2) / rho) ** expo
    return num / den if den > 0 else 0.0


@dataclass
class SchwarzReport:
    rho: float
    alpha: float
    p: float
    quotients: np.ndarray
    sup_quotient: float
    rejected_pairs: int


def schwarz_bound_check(fn, fn_dbar, rho, alpha, pairs, p=P_DEFAULT):
    """Evaluate the quotient on given parameter pairs inside alpha*D.

    Pairs falling outside alpha*D are rejected (counted, not evaluated).
    """
    if not alpha < rho:
        raise ValueError("need alpha < rho")
    qs, rejected = [], 0
    for t1, t2 in pairs:
        if abs(t1) >= alpha or abs(t2) >= alpha or t1 == t2:
            rejected += 1
            continue
        qs.append(schwarz_quotient(fn, fn_dbar, rho, t1, t2, p))
    qs = np.asarray(qs)
    return SchwarzReport(rho, alpha, p, qs, float(qs.max()) if qs.size else 0.0,
                         rejected)


@dataclass
class SchwarzBattery:
    rhos: tuple
    r: float
    p: float
    sup_quotients: np.ndarray  # (n_funcs, n_rhos)
    spreads: np.ndarray
    worst_spread: float
    passed: bool


def schwarz_battery(p=P_DEFAULT, rhos=(1.0, 0.5, 0.25), r=0.5, n_funcs=20,
                    n_pairs=12, degree=3, seed=7, spread_limit=2.0):
    """Scaling battery: each test function is replayed on discs of radius
    rho with the pair geometry scaled along (tau = rho * sigma), so the sup
    quotient should depend only on r = alpha/rho.  Passes when the spread
    across rho stays within spread_limit for every function.
    """
    rng = np.random.default_rng(seed)
    sups = np.empty((n_funcs, len(rhos)))
    for i in range(n_funcs):
        f = random_disc_polynomial(rng, degree)
        radii = r * np.sqrt(rng.uniform(0.0, 0.92, size=(n_pairs, 2)))
        angles = rng.uniform(0.0, 2 * np.pi, size=(n_pairs, 2))
        sigmas = radii * np.exp(1j * angles)
        for j, rho in enumerate(rhos):
            def fn(taus, rho=rho):
                return f(np.asarray(taus) / rho)

            def fn_dbar(taus, rho=rho):
                return f.dbar(np.asarray(taus) / rho) / rho

            pairs = [(rho * s1, rho * s2) for s1, s2 in sigmas]
            rep = schwarz_bound_check(fn, fn_dbar, rho, r * rho, pairs, p)
            sups[i, j] = rep.sup_quotient
    spreads = sups.max(axis=1) / np.maximum(sups.min(axis=1), 1e-300)
    worst = float(spreads.max())
    return SchwarzBattery(tuple(rhos), r, p, sups, spreads, worst,
                          worst <= spread_limit)


# --------------------------------------------------------------------------
# Limit detection


@dataclass
class LimitEstimate:
    """Cauchy-tail limit verdict over dyadic scales.

    tail_widths[k] is the diameter of all recorded values at scale index k
    and beyond (nonincreasing by construction); the verdict is convergent
    exactly when the last three widths sit below tol and every late shell
    produced samples.
    """

    scales: np.ndarray
    tail_widths: np.ndarray
    spreads: np.ndarray
    means: np.ndarray
    counts: np.ndarray
    tol: float
    verdict: str  # "convergent" | "divergent"
    value: complex | None
    empty_scales: list = field(default_factory=list)

    @property
    def converged(self):
        return self.verdict == "convergent"


def _hull(pts):
    """Convex hull (monotone chain) of an (m, 2) point set."""
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    if len(pts) <= 2:
        return pts

    def cross2(a, b):
        return a[0] * b[1] - a[1] * b[0]

    def chain(ps):
        out = []
        for q in ps:
            while len(out) >= 2 and cross2(out[-1] - out[-2], q - out[-2]) <= 0:
                out.pop()
            out.append(q)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    return np.asarray(lower[:-1] + upper[:-1])


def _diameter(values):
    """Exact diameter of a finite set of complex values (via the hull for
    large sets, so tail diameters stay cheap)."""
    values = np.asarray(values, dtype=complex).ravel()
    if values.size <= 1:
        return 0.0
    if values.size <= 200:
        return float(np.abs(values[:, None] - values[None, :]).max())
    pts = np.unique(np.column_stack([values.real, values.imag]), axis=0)
    h = _hull(pts)
    d2 = ((h[:, None, :] - h[None, :, :]) ** 2).sum(-1)
    return float(np.sqrt(d2.max()))


def _tail_verdict(scales, groups, tol, empty):
    """Assemble a LimitEstimate from per-scale value groups."""
    spreads, means, counts = [], [], []
    for g in groups:
        if len(g):
            g = np.asarray(g)
            spreads.append(_diameter(g))
            means.append(complex(g.mean()))
            counts.append(len(g))
        else:
            spreads.append(np.nan)
            means.append(np.nan + 0j)
            counts.append(0)
    widths = np.empty(len(groups))
    tail = np.empty(0, dtype=complex)
    for k in range(len(groups) - 1, -1, -1):
        tail = np.concatenate([tail, np.asarray(groups[k], dtype=complex)])
        widths[k] = _diameter(tail) if tail.size else np.nan
    ok = (len(groups) >= 3 and all(c > 0 for c in counts[-3:])
          and np.all(widths[-3:] <= tol))
    verdict = "convergent" if ok else "divergent"
    value = means[-1] if ok else None
    return LimitEstimate(np.asarray(scales, dtype=float), widths,
                         np.asarray(spreads), np.asarray(means),
                         np.asarray(counts), tol, verdict, value, empty)


def limit_along_curve(F, gamma, D=None, tol=1e-6, k0=3, K=14):
    """Evaluate F along gamma at t_k = 1 - 2^-k, k = k0..k0+K-1, and apply
    the Cauchy-tail criterion.  If a domain is given the curve is checked
    for admissibility first and interior evaluation is enforced."""
    if D is not None:
        ok, notes = is_admissible_curve(D, gamma)
        if not ok:
            raise ValueError("curve is not admissible: " + "; ".join(notes))
    curve = gamma if isinstance(gamma, AdmissibleCurve) else AdmissibleCurve(gamma)
    ks = np.arange(k0, k0 + K)
    scales = 0.5 ** ks
    groups, empty = [], []
    for k in ks:
        q = np.atleast_1d(np.asarray(curve(1.0 - 0.5 ** k), dtype=complex))
        if D is not None and float(np.asarray(D.rho(q[None, :]))[0]) >= 0:
            groups.append([])
            empty.append(int(k))
            continue
        groups.append([complex(F(q[None, :])[0])])
    return _tail_verdict(scales, groups, tol, empty)


def admissible_limit(F, D, p, alpha, eps, tol=1e-6, k0=3, K=12, budget=200,
                     retry_cap=100_000, seed=0):
    """Sample A_{alpha,eps}(p) in the dyadic shells {2^-k-1 <= delta_p <=
    2^-k} by rejection and apply the Cauchy-tail criterion to the values.

    Proposals start from boundary anchors offset tangentially from p
    (scaled with the shell's admissible width alpha^(1/2) s^((1+eps)/2))
    and pushed inward to depths in [s/2, s]; in_admissible plus the shell
    bounds filter them.  Empty shells are reported, never silently skipped.
    """
    if alpha <= 0 or eps <= 0:
        raise ValueError("need alpha > 0 and eps > 0")
    rng = np.random.default_rng(seed)
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    H = holomorphic_tangent(D, p)
    ks = np.arange(k0, k0 + K)
    scales = 0.5 ** ks
    groups, empty = [], []
    for k in ks:
        s = 0.5 ** k
        width = 0.45 * np.sqrt(alpha) * s ** ((1 + eps) / 2)
        vals, tried = [], 0
        while len(vals) < budget and tried < retry_cap:
            m = min(4 * budget, retry_cap - tried)
            tried += m
            c = rng.standard_normal((m, H.shape[1])) * width
            anchors = project_boundary(D, p[None, :] + deinterleave(c @ H.T))
            G = D.gradient(anchors)
            nu = -G / np.linalg.norm(G, axis=1, keepdims=True)
            depth = rng.uniform(0.5 * s, s, size=m)
            Q = anchors + depth[:, None] * deinterleave(nu)
            keep = np.asarray(D.rho(Q), dtype=float) < 0
            keep &= in_admissible(D, p, Q, alpha, eps)
            dd = delta_p(D, p, Q)
            keep &= (dd >= 0.5 * s) & (dd <= s)
            vals.extend(F(Q[keep])[: budget - len(vals)].tolist())
        groups.append(vals)
        if not vals:
            empty.append(int(k))
    return _tail_verdict(scales, groups, tol, empty)


# --------------------------------------------------------------------------
# Chirka-Lindelof experiment


@dataclass
class FillingLadder:
    depths: np.ndarray
    radii: np.ndarray
    rho0s: np.ndarray
    oscillations: np.ndarray
    osc_exponent: float
    radius_exponent: float
    max_disc_shift: float  # structure correction of the solved discs


@dataclass
class ChirkaLindelofReport:
    p: np.ndarray
    alpha: float
    eps: float
    tol: float
    profile: SubsolutionProfile
    hypotheses_ok: bool
    curve_limit: LimitEstimate
    region_grid: list  # (alpha, eps) pairs
    region_limits: list  # LimitEstimate per pair
    max_disagreement: float
    ladder: FillingLadder
    passed: bool
    label: str


def _filling_ladder(ND, F_t, alpha, eps, depths, afield=None, op=None,
                    grid_n=32, nang=24):
    """Replay the proof mechanism on the normalized model: affine discs
    through (0', -i s) in a holomorphic-tangent direction, oscillation of F
    between disc center and disc points, fitted decay exponent in s.  When
    a structure field is present the discs are re-solved under it and the
    maximal deviation from the affine seed is recorded."""
    n = ND.n
    v = np.zeros(n, dtype=complex)
    v[0] = 1.0
    radii, rho0s, oscs = [], [], []
    max_shift = 0.0
    if afield is not None and op is None:
        op = CGOperator(make_grid(1.0, grid_n))
    angles = np.exp(2j * np.pi * np.arange(nang) / nang)
    for s in depths:
        disc = filling_discs(ND, -1j * s, v, alpha, eps)
        radii.append(disc.r)
        rho0s.append(disc.rho0)
        zs = np.concatenate([f * disc.r * angles for f in (1.0, 0.6, 0.3)])
        pts = disc(zs)
        center_val = complex(F_t(disc.base[None, :])[0])
        osc = float(np.abs(F_t(pts) - center_val).max())
        oscs.append(osc)
        if afield is not None:
            seed = affine_disc(op.grid, disc.base, v, disc.r)
            solved = solve_disc(seed, afield, op=op, tol=1e-8)
            max_shift = max(max_shift,
                            float(np.abs(solved.values - seed.values).max()))
    depths = np.asarray(depths)
    oscs = np.asarray(oscs)
    x = np.log(depths)
    pos = oscs > 1e-300
    osc_slope = (np.polyfit(x[pos], np.log(oscs[pos]), 1)[0] if pos.sum() >= 2
                 else np.inf)
    rad_slope = np.polyfit(x, np.log(radii), 1)[0]
    return FillingLadder(depths, np.asarray(radii), np.asarray(rho0s), oscs,
                         float(osc_slope), float(rad_slope), max_shift)


def chirka_lindelof_experiment(F, D, p, gamma=None, afield=None,
                               alphas=(0.5, 1.0, 2.0), epss=(0.25, 0.5),
                               tol=2e-2, seed=0, ladder_ks=range(3, 9),
                               grid_n=32, region_K=12):
    """One admissible-curve limit upgraded to admissible limits over a
    parameter grid, with the filling-disc ladder replaying the mechanism.

    The profiling gate runs first; a failing profile labels the report
    "hypotheses-violated" but the limit computations still execute (the
    disagreement, if any, is a finding).  passed = all verdicts convergent
    and max pairwise disagreement of the limit values <= tol.
    """
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    afield = afield if afield is not None else D.a_field
    profile = estimate_subsolution_profile(F, D, p, afield, seed=seed)
    hyp_ok = profile.passed

    if gamma is None:
        nu = deinterleave(D.inward_normal(p))

        def gamma(t, p=p, nu=nu):
            return p + 0.25 * (1.0 - t) * nu

    curve_est = limit_along_curve(F, gamma, D=D, tol=tol)

    grid_pairs, region_limits = [], []
    for a in alphas:
        for e in epss:
            grid_pairs.append((a, e))
            region_limits.append(admissible_limit(F, D, p, a, e, tol=tol,
                                                  K=region_K, seed=seed))

    values = [est.value for est in [curve_est] + region_limits
              if est.value is not None]
    if len(values) >= 2:
        arr = np.asarray(values)
        disagreement = float(np.abs(arr[:, None] - arr[None, :]).max())
    else:
        disagreement = np.inf

    chart, ND = normalize_domain(D, p)

    def F_t(W):
        return F(chart.backward(np.atleast_2d(W)))

    ladder = _filling_ladder(ND, F_t, max(alphas), 0.5,
                             [0.5 ** k for k in ladder_ks],
                             afield=ND.a_field, grid_n=grid_n)

    all_conv = curve_est.converged and all(r.converged for r in region_limits)
    passed = all_conv and disagreement <= tol
    label = "ok" if hyp_ok else "hypotheses-violated"
    return ChirkaLindelofReport(p, max(alphas), max(epss), tol, profile,
                                hyp_ok, curve_est, grid_pairs, region_limits,
                                disagreement, ladder, passed, label)


# --------------------------------------------------------------------------
# Tangent-curve experiment


@dataclass
class TangentCurvesReport:
    ts: np.ndarray
    curve_differences: np.ndarray  # |F(gamma1(t)) - F(gamma2(t))|
    disc_differences: np.ndarray  # |F(z_t(0)) - F(z_t(zeta2))|
    ratios: np.ndarray  # |zeta2| / (1 - t)
    gn_errors: np.ndarray
    decay_rate: float
    flag: str
    passed: bool


def tangent_curves_experiment(F, D, gamma1, gamma2, afield=None, ks=range(2, 11),
                              tol=1e-2, grid_n=32, scale=0.5, op=None):
    """Compare F along two admissible curves tangent at the same boundary
    point, and through the transverse disc family joining them.

    Preconditions are enforced: both curves admissible, same endpoint,
    tangents within 1e-3 radians.  passed = |F o gamma1 - F o gamma2| is
    nonincreasing with final value <= tol and the family's |zeta2|/(1-t)
    ends <= 0.1.
    """
    g1 = gamma1 if isinstance(gamma1, AdmissibleCurve) else AdmissibleCurve(gamma1)
    g2 = gamma2 if isinstance(gamma2, AdmissibleCurve) else AdmissibleCurve(gamma2)
    for g, name in ((g1, "gamma1"), (g2, "gamma2")):
        ok, notes = is_admissible_curve(D, g)
        if not ok:
            raise ValueError(f"{name} is not admissible: " + "; ".join(notes))
    t1 = interleave(np.atleast_2d(g1.derivative(1.0)))[0]
    t2 = interleave(np.atleast_2d(g2.derivative(1.0)))[0]
    cosang = np.dot(t1, t2) / (np.linalg.norm(t1) * np.linalg.norm(t2))
    angle = float(np.arccos(np.clip(cosang, -1.0, 1.0)))
    if angle > 1e-3:
        raise ValueError(f"curves are not tangent: angle {angle:.2e} > 1e-3")

    ts = 1.0 - 0.5 ** np.asarray(list(ks), dtype=float)
    pts1 = np.stack([np.atleast_1d(np.asarray(g1(t), dtype=complex)) for t in ts])
    pts2 = np.stack([np.atleast_1d(np.asarray(g2(t), dtype=complex)) for t in ts])
    curve_diffs = np.abs(F(pts1) - F(pts2))

    if op is None:
        op = CGOperator(make_grid(1.0, grid_n))
    if afield is None:
        afield = D.a_field
    from .almost_complex import ComplexMatrixField
    if afield is None:
        afield = ComplexMatrixField.zero(D.n)
    fam = transverse_family(g1, g2, afield, ts, op, domain=D, scale=scale)
    disc_diffs = np.empty(len(ts))
    for i, disc in enumerate(fam.discs):
        v0 = complex(F(disc.at_origin()[None, :])[0])
        v2 = complex(F(np.atleast_2d(disc(fam.zeta2[i])))[0])
        disc_diffs[i] = abs(v0 - v2)

    pos = curve_diffs > 1e-300
    if pos.sum() >= 2:
        rate = float(np.polyfit(np.log(1.0 - ts[pos]),
                                np.log(curve_diffs[pos]), 1)[0])
    else:
        rate = np.inf
    monotone = bool(np.all(np.diff(curve_diffs) <= 1e-15 + 0.0 * curve_diffs[:-1]))
    passed = monotone and curve_diffs[-1] <= tol and fam.ratios[-1] <= 0.1
    return TangentCurvesReport(ts, curve_diffs, disc_diffs, fam.ratios,
                               fam.gn_errors, rate, fam.flag, passed)


# --------------------------------------------------------------------------
# Fatou survey


@dataclass
class SurveyReport:
    params: np.ndarray
    points: np.ndarray
    converged: np.ndarray
    limits: np.ndarray
    fraction: float
    profile: SubsolutionProfile
    generic: bool
    rank_margins: np.ndarray
    rejected: bool
    reason: str
    passed: bool


def fatou_survey(F, D, patch, sample_count=64, alpha=1.0, eps=0.5, tol=1e-2,
                 seed=0, k0=3, K=12, budget=60, min_fraction=0.95,
                 afield=None):
    """Sample the patch uniformly and run admissible_limit at each boundary
    point; report the convergent fraction.

    Gates: the patch must be generic (rank [frame, J frame] full at sampled
    parameters) and F must pass subsolution profiling at a representative
    patch point -- otherwise the survey is rejected up front, with the
    failing profile attached.
    """
    afield = afield if afield is not None else D.a_field
    generic, margins = is_generic(patch, domain=D)
    if not generic:
        return SurveyReport(np.empty((0, patch.k)), np.empty((0, D.n)),
                            np.empty(0, dtype=bool), np.empty(0, dtype=complex),
                            0.0, None, False, margins, True,
                            "patch is not generic", False)
    mid = 0.5 * (np.asarray(patch.lo, dtype=float) + np.asarray(patch.hi, dtype=float))
    p_repr = patch.points(mid)[0]
    profile = estimate_subsolution_profile(F, D, p_repr, afield, seed=seed)
    if not profile.passed:
        return SurveyReport(np.empty((0, patch.k)), np.empty((0, D.n)),
                            np.empty(0, dtype=bool), np.empty(0, dtype=complex),
                            0.0, profile, True, margins, True,
                            f"profiling failed: tau = {profile.tau:.3f} <= 0",
                            False)

    rng = np.random.default_rng(seed)
    lo = np.asarray(patch.lo, dtype=float)
    hi = np.asarray(patch.hi, dtype=float)
    params = rng.uniform(lo, hi, size=(sample_count, patch.k))
    pts = patch.points(params)
    conv = np.zeros(sample_count, dtype=bool)
    lims = np.full(sample_count, np.nan + 0j)
    for i in range(sample_count):
        est = admissible_limit(F, D, pts[i], alpha, eps, tol=tol, k0=k0, K=K,
                               budget=budget, seed=seed + 1 + i)
        conv[i] = est.converged
        if est.value is not None:
            lims[i] = est.value
    fraction = float(conv.mean())
    return SurveyReport(params, pts, conv, lims, fraction, profile, True,
                        margins, False, "", fraction >= min_fraction)
