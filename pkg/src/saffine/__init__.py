"""Special affine differential invariants of curves in R^n."""

from .affgroup import SpecialAffineMap, apply, compose, invert, make_map, random_map, random_sl
from .curvekit import (
    CurveProvider,
    DerivativeJet,
    PolynomialCurve,
    SampledCurve,
    eval_jet,
    fd_stencil,
    make_catalog,
)
from .equivalence import EquivalenceReport, check_equivalence, compare_profiles, recover_map, verify_map
from .invariants import (
    ArcLengthTable,
    InvariantProfile,
    PullbackMatrix,
    arc_length,
    check_regular,
    cramer_coeffs,
    curvatures,
    frame_alpha,
    gram_det,
    invariant_profile,
    natural_curve,
    pullback,
    reparametrize,
)
from .reconstruct import CurvatureSpec, frame_ode_matrix, integrate_frame, roundtrip

__version__ = "0.1.0"

__all__ = [
    "ArcLengthTable",
    "CurvatureSpec",
    "CurveProvider",
    "DerivativeJet",
    "EquivalenceReport",
    "InvariantProfile",
    "PolynomialCurve",
    "PullbackMatrix",
    "SampledCurve",
    "SpecialAffineMap",
    "apply",
    "arc_length",
    "check_equivalence",
    "check_regular",
    "compare_profiles",
    "compose",
    "cramer_coeffs",
    "curvatures",
    "eval_jet",
    "fd_stencil",
    "frame_alpha",
    "frame_ode_matrix",
    "gram_det",
    "integrate_frame",
    "invariant_profile",
    "invert",
    "make_catalog",
    "make_map",
    "natural_curve",
    "pullback",
    "random_map",
    "random_sl",
    "recover_map",
    "reparametrize",
    "roundtrip",
    "verify_map",
]
