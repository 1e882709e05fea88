"""Numerical boundary-limit experiments on almost complex domains.

Layers, bottom up:

  grid_disc          Cartesian grid calculus on a closed disc (Wirtinger
                     derivatives, quadrature, interpolation).
  cauchy_green       the Cauchy-Green transform inverting d/d(conj zeta).
  almost_complex     structures J, their complex matrices A, charts and
                     normalization.
  disc_solver        Picard iteration for pseudoholomorphic discs and the
                     transverse disc families.
  boundary_geometry  defining domains, approach regions, filling discs.
  testfuncs          test functions with symbolic gradients.
  fatou_lab          profiling, Schwarz batteries, limit experiments.
  report / config / cli  deterministic outputs and the command line.
"""

from .almost_complex import (AffineChart, ComplexMatrixField,
                             NormalizationError, StructureField, a_from_j,
                             dbar_j, decompose_one_form, deinterleave,
                             form_basis, interleave, j_from_a, j_std,
                             normalize_chart, pushforward_a, to_complex_pair,
                             to_real)
from .boundary_geometry import (AdmissibleCurve, ApproachRegion,
                                DefiningDomain, FillingDisc, SubmanifoldPatch,
                                ball, d_p, delta_p, dist_boundary,
                                filling_discs, halfspace, holomorphic_tangent,
                                in_admissible, in_cone, is_admissible_curve,
                                is_generic, normal_admissible_depth,
                                normalize_domain, poly_domain,
                                project_boundary)
from .cauchy_green import CGOperator, cg_exterior, cg_transform
from .config import Config, ConfigError, build_afield, build_domain, load_config
from .disc_solver import (ChartEscapeError, ConvergenceError, DiscMap,
                          NWDisc, TransverseFamily, affine_disc,
                          nijenhuis_woolf_disc, psi_j, solve_disc,
                          transverse_family)
from .fatou_lab import (ChirkaLindelofReport, FillingLadder, LimitEstimate,
                        SchwarzBattery, SubsolutionProfile, SurveyReport,
                        TangentCurvesReport, admissible_limit,
                        chirka_lindelof_experiment, disc_lp_norm,
                        disc_sup_norm, estimate_subsolution_profile,
                        fatou_survey, limit_along_curve, schwarz_battery,
                        schwarz_bound_check, schwarz_quotient,
                        tangent_curves_experiment)
from .grid_disc import (GridDisc, GridFunction, integral, interpolate,
                        make_grid, norm, wirtinger_d, wirtinger_dbar)
from .testfuncs import (DiscPolynomial, TestFunction, holo_exp, oscillator,
                        peel, random_disc_polynomial)

__version__ = "0.1.0"
