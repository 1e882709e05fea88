"""One admissible-curve limit upgraded to all admissible limits.

The pipeline on the flat model domain {Im z_2 < 0}:

  1. profile ||dbar F|| against boundary distance -- the gate that F is
     asymptotically holomorphic (fitted blowup milder than dist^(-1/2));
  2. detect the limit of F along the inward normal curve;
  3. re-detect it through admissible approach regions over a grid of
     apertures (alpha) and tangency exponents (eps);
  4. replay the proof mechanism: holomorphic-tangent discs filled against
     the boundary whose oscillation must decay with depth.

F = exp(z_2) + conj(z_1) (-rho)^0.6 has boundary value exp(z_2), hence
analytic limit 1 at the origin.
"""

import pathlib

import numpy as np

from jholo import chirka_lindelof_experiment, estimate_subsolution_profile, halfspace, holo_exp, peel
from jholo.report import save_loglog

OUT = pathlib.Path(__file__).with_name("output")

D = halfspace(2)
F = holo_exp(2) + peel(D, 0.6)
p = np.zeros(2, dtype=complex)

prof = estimate_subsolution_profile(F, D, p, seed=0)
print(f"profiling: ||dbar F|| ~ C dist^(-1/2 + tau), tau = {prof.tau:.3f} "
      f"-> {prof.verdict}")

rep = chirka_lindelof_experiment(F, D, p, seed=0)
print(f"\ncurve limit along the inward normal: {rep.curve_limit.verdict}, "
      f"value {rep.curve_limit.value:.6f}")
print("admissible limits over the (alpha, eps) grid:")
for (a, e), est in zip(rep.region_grid, rep.region_limits):
    print(f"  alpha = {a:3.1f}, eps = {e:4.2f}: {est.verdict:10s} "
          f"value {est.value:.6f}")
print(f"max pairwise disagreement: {rep.max_disagreement:.2e} "
      f"(tolerance {rep.tol})")
print(f"\nfilling-disc ladder: oscillation ~ depth^{rep.ladder.osc_exponent:.2f}, "
      f"disc radius ~ depth^{rep.ladder.radius_exponent:.2f}")
print(f"experiment label: {rep.label}, passed: {rep.passed}")

path = save_loglog(str(OUT / "filling_ladder.svg"), rep.ladder.depths,
                   {"oscillation of F": rep.ladder.oscillations,
                    "disc radius": rep.ladder.radii},
                   "|Im z_2| at the disc center", "value",
                   "filling-disc ladder at the origin")
print(f"plot written to {path}")
