"""Random matrix product laboratory.

Monte Carlo and exact-arithmetic tools for products of random matrices over
R and Q_p: Lyapunov spectra, invariant subspace structure, stationary
measures on projective space, limit sets, joint-spectral-radius certificates
and decay-rate experiments.
"""

from .fields import FieldSpec, abs_scalar, padic_valuation, polar_part, vector_norm
from .linalg import (KakFactors, LinalgError, Matrix, ProjPoint, Subspace,
                     distance_to_subspace, fubini_distance, kak_decompose,
                     orthogonal_complement, wedge_square)
from .measure import MeasureSpec, RngStream, sample, transpose_measure, validate
from .presets import example_chart, example_line, example_measure
from .walks import GapEstimate, SpectrumEstimate, lyapunov_spectrum, top_exponent, top_gap
from .structure import StructureReport, compute_structure, duality_check, restrict_measure
from .skew import AffineMap, SkewChart, SkewPoint, act_skew, sigma_cocycle, to_chart, from_chart
from .stationary import (EmpiricalMeasure, energy_distance, sample_stationary,
                         stationarity_residual, subspace_mass)
from .limitset import ProximalData, attractor_point_block, limit_set_sample, proximal_check
from .jsr import JsrBounds, compactness_certificate, jsr_bounds, noncompactness_witness
from .regularity import (direction_convergence_rate, hitting_probability_curve,
                         holder_alpha_estimate)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "FieldSpec", "abs_scalar", "padic_valuation", "polar_part", "vector_norm",
    "KakFactors", "LinalgError", "Matrix", "ProjPoint", "Subspace",
    "distance_to_subspace", "fubini_distance", "kak_decompose",
    "orthogonal_complement", "wedge_square",
    "MeasureSpec", "RngStream", "sample", "transpose_measure", "validate",
    "example_chart", "example_line", "example_measure",
    "GapEstimate", "SpectrumEstimate", "lyapunov_spectrum", "top_exponent", "top_gap",
    "StructureReport", "compute_structure", "duality_check", "restrict_measure",
    "AffineMap", "SkewChart", "SkewPoint", "act_skew", "sigma_cocycle",
    "to_chart", "from_chart",
    "EmpiricalMeasure", "energy_distance", "sample_stationary",
    "stationarity_residual", "subspace_mass",
    "ProximalData", "attractor_point_block", "limit_set_sample", "proximal_check",
    "JsrBounds", "compactness_certificate", "jsr_bounds", "noncompactness_witness",
    "direction_convergence_rate", "hitting_probability_curve", "holder_alpha_estimate",
    "BACKEND",
]
