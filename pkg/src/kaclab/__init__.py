"""Numerical laboratory for zero-free regions of Kac polynomials with
heavy-tailed i.i.d. coefficients."""

__version__ = "0.1.0"

from .coefficients import (AntiConcentrationCert, CoefficientLaw, MomentEstimate,
                           PolynomialSample, empirical_moment, estimate_anticoncentration,
                           sample_coefficients)
from .evaluator import (EvalResult, compute_S, eval_layer, horner_eval, region_min_max,
                        tail_functional)
from .gram import (FrequencyFrame, dvk_threshold_check, gram_det, image_norm_sq,
                   lattice_dist)
from .region import GridPoint, RegionSpec, build_region_spec, contains, grid_points
from .roots import RootSet, angular_ks, find_roots, radial_stats, region_root_count
from .smallball import (SmallBallEstimate, fit_scaling, gcd_census, mc_small_ball,
                        remark_bound, rv_bound)

__all__ = [
    "AntiConcentrationCert", "CoefficientLaw", "EvalResult", "FrequencyFrame", "GridPoint",
    "MomentEstimate", "PolynomialSample", "RegionSpec", "RootSet", "SmallBallEstimate",
    "angular_ks", "build_region_spec", "compute_S", "contains", "dvk_threshold_check",
    "empirical_moment", "estimate_anticoncentration", "eval_layer", "find_roots",
    "fit_scaling", "gcd_census", "gram_det", "grid_points", "horner_eval", "image_norm_sq",
    "lattice_dist", "mc_small_ball", "radial_stats", "region_min_max", "region_root_count",
    "remark_bound", "rv_bound", "sample_coefficients", "tail_functional",
]
