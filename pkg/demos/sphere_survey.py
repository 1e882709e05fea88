"""Admissible limits over a totally real patch of the sphere in C^2.

The torus patch (e^(i theta_1), e^(i theta_2)) / sqrt(2) sits inside the
unit sphere and is totally real: its tangent plane at every point spans
C^2 together with its rotation by i, so no complex line hides in it.  The
survey samples the patch uniformly, runs the admissible-limit detector at
every sampled boundary point, and reports the convergent fraction.  A
bounded function that oscillates at the boundary fails the subsolution
profiling gate and is rejected before any sampling.
"""

import pathlib

import numpy as np

from jholo import ball, fatou_survey, holo_exp, oscillator, peel
from jholo.boundary_geometry import SubmanifoldPatch
from jholo.report import save_scatter

OUT = pathlib.Path(__file__).with_name("output")


def embed(U):
    U = np.atleast_2d(np.asarray(U, dtype=float))
    return np.stack([np.exp(1j * U[:, 0]), np.exp(1j * U[:, 1])],
                    axis=1) / np.sqrt(2.0)


patch = SubmanifoldPatch(embed, 2, np.array([0.2, 0.2]),
                         np.array([1.2, 1.2]), name="torus")
D = ball(2)
F = holo_exp(2) + peel(D, 0.6)

rep = fatou_survey(F, D, patch, sample_count=24, seed=0)
print(f"patch generic: {rep.generic} "
      f"(worst rank margin {rep.rank_margins.min():.3f})")
print(f"profiling tau at the patch center: {rep.profile.tau:.3f} "
      f"-> {rep.profile.verdict}")
print(f"convergent fraction: {rep.fraction:.3f} over {len(rep.points)} points")
worst = np.abs(rep.limits - np.exp(rep.points[:, 1])).max()
print(f"worst |limit - exp(z_2)| over the patch: {worst:.2e}")

neg = fatou_survey(oscillator(D), D, patch, sample_count=24, seed=0)
print(f"\noscillator control: rejected = {neg.rejected} ({neg.reason})")

path = save_scatter(str(OUT / "sphere_survey.svg"), rep.params[:, 0],
                    rep.params[:, 1], mask=rep.converged,
                    xlabel="theta_1", ylabel="theta_2",
                    title="admissible limits on the torus patch")
print(f"plot written to {path}")
