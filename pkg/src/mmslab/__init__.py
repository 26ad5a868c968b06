"""mmslab: a numerical laboratory for metric measure spaces.

Averaging and maximal averaging operators, local comparability, doubling,
blossoms, greedy Vitali covering, exact operator norms on finite spaces, and
the exponential / gaussian uniform-bound pipelines, with every quantitative
claim checked by `mmslab.verification.run_claims` (or `mmslab verify-paper`
on the command line).
"""

__version__ = "0.1.0"

from .spaces import (Ball, EuclideanSpace, FiniteMetricSpace, IntersectResult,
                     PathGraphSpace, Space, UltrametricSpace, balls_intersect,
                     contains, distance, load_space, parse_space)
from .measures import (AtomicMeasure, CallableFunction, Density1D,
                       DiracFunction, GaussianMeasure, Measure, TableFunction,
                       ball_mass, ball_mass_mc, counting_measure,
                       exponential_measure, gaussian_measure, integrate,
                       lebesgue_measure)
from .operators import (OperatorSpec, ZeroMassBall, average,
                        directional_average_right, maximal_centered,
                        maximal_uncentered)
from .geometry import (ConstantEstimate, VitaliResult, blossom_constant,
                       blossom_mass, chain_doubling_bound,
                       closed_ball_equivalence_check, comparability_sup,
                       doubling_constant, geometric_doubling_number,
                       intersecting_comparability_check, local_comparability,
                       measured_chain_length, vitali_select)
from .norms import (Kernel, NormReport, build_kernel, fubini_l1_upper,
                    op_norm_l1, op_norm_lp, riesz_interpolate,
                    single_dirac_weak11, weak_type_constant)
from .gausslab import (CSFormulas, GaussBoundReport, cap_measure_bound,
                       cap_volume_ratio, cs_formulas, firstop_check,
                       G_ratio_check, gamma_ratio_check, intersection_mass_2d,
                       l1_upper_bound, secondopx_check, shell_mass,
                       weak_bound_threshold, weak_lower_bound)
from .gallery import (GalleryEntry, build, build_arc_connected, build_broom,
                      build_infinite_broom, build_onedir, build_standard,
                      gallery_names)
from .verification import ClaimResult, run_claims
