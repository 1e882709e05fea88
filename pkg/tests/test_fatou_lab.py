"""Tests for profiling, Schwarz batteries, and the limit experiments."""

import numpy as np
import pytest

from jholo import (TestFunction, admissible_limit, ball, chirka_lindelof_experiment,
                   estimate_subsolution_profile, fatou_survey, halfspace, holo_exp,
                   limit_along_curve, oscillator, peel, random_disc_polynomial,
                   schwarz_battery, schwarz_bound_check, schwarz_quotient,
                   tangent_curves_experiment)
from jholo.boundary_geometry import SubmanifoldPatch
from jholo.fatou_lab import _diameter


# --------------------------------------------------------------------------
# Subsolution profiling


def test_profile_holomorphic_function():
    D = halfspace(2)
    prof = estimate_subsolution_profile(holo_exp(2), D, np.zeros(2, complex))
    assert prof.verdict == "holomorphic"
    assert prof.passed
    assert prof.tau == np.inf


def test_profile_peel_rates():
    # conj(z1) * (-rho)^beta has |dbar F| ~ dist^(beta-1) off {z1 = 0}, so the
    # fitted tau = 1/2 + slope should land near beta - 1/2.
    D = halfspace(2)
    p = np.zeros(2, dtype=complex)
    good = estimate_subsolution_profile(peel(D, 0.6), D, p, seed=1)
    assert good.verdict == "subsolution", f"verdict {good.verdict}, tau {good.tau}"
    assert abs(good.tau - 0.1) < 0.1, f"tau {good.tau} not near 0.1"
    assert good.C > 0

    bad = estimate_subsolution_profile(peel(D, 0.1), D, p, seed=1)
    assert bad.verdict == "not-subsolution", f"tau {bad.tau}"
    assert bad.tau < 0


def test_profile_oscillator_fails_gate():
    D = halfspace(2)
    prof = estimate_subsolution_profile(oscillator(D), D, np.zeros(2, complex))
    assert prof.verdict == "not-subsolution"
    assert prof.tau < 0
    assert not prof.passed
    assert prof.table.shape[1] == 2 and len(prof.table) >= 8


def test_profile_on_ball_boundary():
    D = ball(2)
    p = np.array([0.0, -1.0j])
    prof = estimate_subsolution_profile(peel(D, 0.6), D, p, seed=3)
    assert prof.verdict == "subsolution", f"tau {prof.tau}"
    assert abs(prof.tau - 0.1) < 0.15, f"tau {prof.tau}"


def test_profile_explicit_sample_cloud():
    D = halfspace(2)
    p = np.zeros(2, dtype=complex)
    rng = np.random.default_rng(0)
    depths = 0.05 * 0.5 ** np.arange(12)
    pts = np.zeros((12, 2), dtype=complex)
    pts[:, 0] = 0.3 + 0.02 * rng.standard_normal(12)
    pts[:, 1] = -1j * depths
    prof = estimate_subsolution_profile(peel(D, 0.6), D, p, samples=pts)
    assert abs(prof.tau - 0.1) < 0.05, f"tau {prof.tau}"
    assert len(prof.table) == 12


def test_profile_sample_cloud_rejects_outside_points():
    D = halfspace(2)
    pts = np.array([[0.3, -0.01j], [0.3, 0.01j]])  # second point is outside
    with pytest.raises(ValueError, match="inside"):
        estimate_subsolution_profile(peel(D, 0.6), D, np.zeros(2, complex),
                                     samples=pts)


def test_profile_needs_three_dyadic_decades():
    D = halfspace(2)
    pts = np.zeros((10, 2), dtype=complex)
    pts[:, 0] = 0.3
    pts[:, 1] = -1j * np.linspace(0.01, 0.02, 10)  # span only a factor of 2
    with pytest.raises(ValueError, match="dyadic"):
        estimate_subsolution_profile(peel(D, 0.6), D, np.zeros(2, complex),
                                     samples=pts)


# --------------------------------------------------------------------------
# Schwarz quotients


def test_schwarz_quotient_constant_function():
    def fn(t):
        return np.full(np.shape(t), 2.0 + 0j)

    def fn_dbar(t):
        return np.zeros(np.shape(t), dtype=complex)

    q = schwarz_quotient(fn, fn_dbar, 1.0, 0.1, -0.2 + 0.1j)
    assert q == 0.0


def test_schwarz_bound_check_rejects_bad_pairs():
    rng = np.random.default_rng(2)
    f = random_disc_polynomial(rng, 3)
    pairs = [(0.1, 0.2), (0.9, 0.1), (0.2, 0.2), (0.1 + 0.2j, -0.3j)]
    rep = schwarz_bound_check(f, f.dbar, 1.0, 0.5, pairs)
    # one pair outside alpha*D and one degenerate pair are counted, not used
    assert rep.rejected_pairs == 2
    assert len(rep.quotients) == 2
    assert rep.sup_quotient == rep.quotients.max()
    assert np.all(rep.quotients >= 0)


def test_schwarz_bound_check_needs_alpha_below_rho():
    rng = np.random.default_rng(2)
    f = random_disc_polynomial(rng, 2)
    with pytest.raises(ValueError, match="alpha"):
        schwarz_bound_check(f, f.dbar, 0.5, 0.5, [(0.1, 0.2)])


@pytest.fixture(scope="module")
def battery():
    return schwarz_battery()


def test_schwarz_battery_scale_invariance(battery):
    assert battery.sup_quotients.shape == (20, 3)
    assert np.all(battery.sup_quotients > 0)
    assert battery.worst_spread <= 2.0, f"spread {battery.worst_spread}"
    assert battery.passed
    assert battery.rhos == (1.0, 0.5, 0.25)


def test_fresh_functions_stay_under_battery_constant(battery):
    # The battery sup is an empirical Hoelder constant; fresh random
    # functions and pair geometries should stay within a factor two of it.
    C_hat = float(battery.sup_quotients.max())
    rng = np.random.default_rng(314)
    for _ in range(6):
        f = random_disc_polynomial(rng, 3)
        radii = 0.5 * np.sqrt(rng.uniform(0.0, 0.92, size=(8, 2)))
        angles = rng.uniform(0.0, 2 * np.pi, size=(8, 2))
        sigmas = radii * np.exp(1j * angles)
        for rho in (1.0, 0.5, 0.25):
            def fn(taus, rho=rho):
                return f(np.asarray(taus) / rho)

            def fn_dbar(taus, rho=rho):
                return f.dbar(np.asarray(taus) / rho) / rho

            pairs = [(rho * s1, rho * s2) for s1, s2 in sigmas]
            rep = schwarz_bound_check(fn, fn_dbar, rho, 0.5 * rho, pairs)
            assert rep.sup_quotient <= 2.0 * C_hat, \
                f"quotient {rep.sup_quotient} > 2 * {C_hat}"


# --------------------------------------------------------------------------
# Tail diameters


def test_diameter_small_and_hull_paths_agree():
    # 16 points on the unit circle: exact diameter 2 (antipodal pairs)
    ring = np.exp(2j * np.pi * np.arange(16) / 16)
    assert abs(_diameter(ring) - 2.0) < 1e-12

    rng = np.random.default_rng(5)
    big = rng.standard_normal(300) + 1j * rng.standard_normal(300)
    brute = np.abs(big[:, None] - big[None, :]).max()
    assert abs(_diameter(big) - brute) < 1e-12, "hull path disagrees with brute force"
    assert _diameter(np.array([1.0 + 1j])) == 0.0


# --------------------------------------------------------------------------
# limit_along_curve


def test_curve_limit_radial_on_ball():
    D = ball(2)
    p = np.array([0.6, -0.8j])
    F = holo_exp(2)

    def gamma(t):
        return (1.0 - 0.25 * (1.0 - t)) * p

    # tail widths for the K = 14 dyadic samples bottom out near 2e-4 here,
    # so the tolerance is the limit-detection resolution, not machine eps
    est = limit_along_curve(F, gamma, D=D, tol=1e-3)
    assert est.converged, f"widths {est.tail_widths[-3:]}"
    assert abs(est.value - np.exp(p[1])) < 1e-3
    assert est.value == est.means[-1]
    assert est.empty_scales == []
    assert np.all(np.diff(est.tail_widths[~np.isnan(est.tail_widths)]) <= 1e-15)


def test_curve_limit_without_domain_guard():
    def gamma(t):
        return np.array([0.0, -1j * (1.0 - t)])

    est = limit_along_curve(holo_exp(2), gamma, tol=1e-3)
    assert est.converged
    assert abs(est.value - 1.0) < 1e-3


def test_curve_limit_oscillator_diverges():
    D = halfspace(2)

    def gamma(t):
        return np.array([0.0, -1j * (1.0 - t)])

    est = limit_along_curve(oscillator(D), gamma, D=D, tol=1e-2)
    assert not est.converged
    assert est.value is None
    # sin(log s) keeps swinging: the overall tail width stays order one
    assert est.tail_widths[0] > 0.5


def test_curve_limit_rejects_inadmissible_curve():
    D = halfspace(2)

    def gamma(t):
        return np.array([0.0, -1j * (0.5 - 0.25 * t)])  # ends at an interior point

    with pytest.raises(ValueError, match="not admissible"):
        limit_along_curve(holo_exp(2), gamma, D=D)


# --------------------------------------------------------------------------
# admissible_limit


def test_admissible_limit_recovers_boundary_value():
    D = halfspace(2)
    F = holo_exp(2) + peel(D, 0.6)
    p = np.zeros(2, dtype=complex)
    est = admissible_limit(F, D, p, 1.0, 0.5, tol=2e-2, seed=11)
    assert est.converged, f"widths {est.tail_widths[-3:]}"
    assert abs(est.value - 1.0) < 2e-2, f"value {est.value}"
    assert np.all(est.counts[-3:] > 0)
    assert np.all(est.counts <= 200)

    # a wider aperture with smaller eps sees the same limit
    est2 = admissible_limit(F, D, p, 2.0, 0.25, tol=2e-2, seed=12)
    assert est2.converged
    assert abs(est2.value - est.value) < 2e-2


def test_admissible_limit_direction_dependent_function_diverges():
    D = halfspace(2)

    def phase(Z):
        return np.conj(Z[:, 0]) / np.abs(Z[:, 0])

    F = TestFunction(phase, None, None, "conj(z1)/|z1|")
    est = admissible_limit(F, D, np.zeros(2, complex), 1.0, 0.5, tol=2e-2,
                           seed=4)
    assert not est.converged
    assert est.value is None
    # every shell sees a full swing of phases
    finite = est.spreads[est.counts > 0]
    assert np.all(finite > 1.0), f"spreads {finite}"


def test_admissible_limit_tiny_aperture_reports_empty_shells():
    # alpha = 1e-6 with eps = 0.5 admits only depths below alpha^2 = 1e-12,
    # far under the sampled shells, so every shell comes back empty
    D = halfspace(2)
    est = admissible_limit(holo_exp(2), D, np.zeros(2, complex), 1e-6, 0.5,
                           k0=3, K=4, budget=4, retry_cap=64, seed=0)
    assert not est.converged
    assert est.value is None
    assert est.empty_scales == [3, 4, 5, 6]
    assert np.all(est.counts == 0)
    assert np.all(np.isnan(est.tail_widths))


def test_admissible_limit_same_seed_is_deterministic():
    D = halfspace(2)
    F = holo_exp(2) + peel(D, 0.6)
    p = np.zeros(2, dtype=complex)
    a = admissible_limit(F, D, p, 1.0, 0.5, tol=2e-2, K=6, budget=40, seed=21)
    b = admissible_limit(F, D, p, 1.0, 0.5, tol=2e-2, K=6, budget=40, seed=21)
    assert np.array_equal(a.means, b.means)
    assert np.array_equal(a.tail_widths, b.tail_widths)
    assert np.array_equal(a.counts, b.counts)


def test_admissible_limit_parameter_validation():
    D = halfspace(2)
    with pytest.raises(ValueError, match="alpha"):
        admissible_limit(holo_exp(2), D, np.zeros(2, complex), 0.0, 0.5)
    with pytest.raises(ValueError, match="eps"):
        admissible_limit(holo_exp(2), D, np.zeros(2, complex), 1.0, -0.1)


# --------------------------------------------------------------------------
# Chirka-Lindelof experiment


def test_chirka_lindelof_positive_case():
    D = halfspace(2)
    F = holo_exp(2) + peel(D, 0.6)
    rep = chirka_lindelof_experiment(F, D, np.zeros(2, complex), seed=0)
    assert rep.hypotheses_ok and rep.label == "ok"
    assert rep.curve_limit.converged
    assert len(rep.region_grid) == 6 and len(rep.region_limits) == 6
    assert all(est.converged for est in rep.region_limits)
    assert rep.max_disagreement <= 2e-2, f"disagreement {rep.max_disagreement}"
    assert rep.passed
    for est in rep.region_limits:
        assert abs(est.value - 1.0) < 2e-2
    # ladder: oscillation of F over the filling discs decays with depth
    assert rep.ladder.osc_exponent > 0.05, f"exponent {rep.ladder.osc_exponent}"
    assert np.all(rep.ladder.radii > 0)
    assert np.all(np.diff(rep.ladder.radii) < 0)
    assert rep.ladder.max_disc_shift == 0.0  # no structure field here


def test_chirka_lindelof_negative_control():
    D = halfspace(2)
    rep = chirka_lindelof_experiment(oscillator(D), D, np.zeros(2, complex),
                                     alphas=(1.0,), epss=(0.5,),
                                     ladder_ks=range(3, 6), seed=0)
    assert not rep.hypotheses_ok
    assert rep.label == "hypotheses-violated"
    assert not rep.curve_limit.converged
    assert not rep.passed


# --------------------------------------------------------------------------
# Tangent-curve experiment


def _tangent_pair(sep=0.25):
    def gamma1(t):
        return np.array([0.0, -0.25j * (1.0 - t)])

    def gamma2(t):
        return np.array([sep * (1.0 - t) ** 2, -0.25j * (1.0 - t)])

    return gamma1, gamma2


def test_tangent_curves_equal_limits():
    D = halfspace(2)
    F = holo_exp(2) + peel(D, 0.6)
    g1, g2 = _tangent_pair()
    rep = tangent_curves_experiment(F, D, g1, g2)
    assert rep.flag == "tangent"
    assert rep.passed
    assert np.all(np.diff(rep.curve_differences) <= 1e-15), "difference not monotone"
    assert rep.curve_differences[-1] <= 1e-2
    assert rep.ratios[-1] <= 0.1, f"ratios {rep.ratios}"
    assert np.max(rep.gn_errors) < 1e-6
    # |F o gamma1 - F o gamma2| = sep (1-t)^2 (0.25 (1-t))^0.6 decays at
    # rate 2.6 in (1-t); the fit should land close to that
    assert abs(rep.decay_rate - 2.6) < 0.1, f"rate {rep.decay_rate}"
    assert np.all(np.isfinite(rep.disc_differences))
    assert rep.disc_differences[-1] < 1e-2


def test_tangent_curves_coincident_pair():
    D = halfspace(2)
    g1, _ = _tangent_pair()
    rep = tangent_curves_experiment(holo_exp(2), D, g1, g1)
    assert rep.passed
    assert np.all(rep.curve_differences == 0.0)
    assert rep.decay_rate == np.inf


def test_tangent_curves_rejects_transversal_pair():
    D = halfspace(2)

    def gamma1(t):
        return np.array([0.0, -0.25j * (1.0 - t)])

    def gamma2(t):
        return np.array([0.3 * (1.0 - t), -0.25j * (1.0 - t)])

    with pytest.raises(ValueError, match="tangent"):
        tangent_curves_experiment(holo_exp(2), D, gamma1, gamma2)


def test_tangent_curves_rejects_inadmissible_curve():
    D = halfspace(2)
    _, g2 = _tangent_pair()

    def bad(t):
        return np.array([0.0, -1j * (0.5 - 0.25 * t)])

    with pytest.raises(ValueError, match="gamma1 is not admissible"):
        tangent_curves_experiment(holo_exp(2), D, bad, g2)


# --------------------------------------------------------------------------
# Fatou survey


def _flat_patch():
    def embed(U):
        U = np.atleast_2d(U)
        return np.column_stack([U[:, 0] + 0j, U[:, 1] + 0j])

    return SubmanifoldPatch(embed, 2, np.array([0.2, 0.2]),
                            np.array([0.6, 0.6]), "flat")


def test_survey_totally_real_patch():
    D = halfspace(2)
    F = holo_exp(2) + peel(D, 0.6)
    rep = fatou_survey(F, D, _flat_patch(), sample_count=10, seed=0)
    assert rep.generic and not rep.rejected
    assert rep.fraction == 1.0, f"fraction {rep.fraction}"
    assert rep.passed
    # the peel part dies at the boundary, so each limit is exp(z2(p))
    expected = np.exp(rep.points[:, 1])
    assert np.all(np.abs(rep.limits - expected) < 2e-2)


def test_survey_rejects_oscillator():
    D = halfspace(2)
    rep = fatou_survey(oscillator(D), D, _flat_patch(), sample_count=4)
    assert rep.rejected and not rep.passed
    assert "profiling failed" in rep.reason
    assert rep.profile.tau < 0
    assert len(rep.points) == 0


def test_survey_rejects_complex_line_patch():
    def embed(U):
        U = np.atleast_2d(U)
        return np.column_stack([U[:, 0] + 1j * U[:, 1],
                                np.zeros(len(U), dtype=complex)])

    patch = SubmanifoldPatch(embed, 2, np.array([-0.3, -0.3]),
                             np.array([0.3, 0.3]), "line")
    rep = fatou_survey(holo_exp(2), D := halfspace(2), patch, sample_count=4)
    assert not rep.generic
    assert rep.rejected and rep.reason == "patch is not generic"
    assert not rep.passed
