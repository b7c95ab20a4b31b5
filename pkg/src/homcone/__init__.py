"""Exact projections onto the homogenization cone of a convex set.

Given a closed convex set C containing the origin, with a projector onto C,
this package computes the projection onto K = cl cone(C x {1}), evaluates
support functions and polar-set / polar-cone membership, and ships brute-force
oracles plus a CLI for reproducible traces and figure point clouds.
"""

from .errors import (
    CapabilityMissing,
    CenterOutsideRadius,
    DimensionMismatch,
    HomconeError,
    InvalidSetSpec,
    MaxIterationsExceeded,
    NegativeAlpha,
    NoClosedFormAvailable,
    NonPositiveAlpha,
    UnsupportedProjection,
)
from .homproj import (
    BisectionTrace,
    Branch,
    ConePoint,
    ProjectionResult,
    QuarticCoefficients,
    TraceRow,
    find_alpha_star,
    project_ball_pen,
    project_homogenization,
    project_ice_cream,
    quartic_coefficients,
    reference_trace,
)
from .oracle import OracleConfig, brute_force_alpha_star, sample_members, sampled_support
from .polar import (
    PolarDescription,
    closed_form_polar,
    homogenization_polar_membership,
    polar_cone_membership,
    polar_membership,
)
from .scaledfun import PsiEvaluator, psi_prime_plus_zero_ball
from .sets import (
    BallPen,
    BallPlusHalfAxisStrip,
    Box,
    Cone,
    ConvexSet,
    Ellipsoid,
    EuclideanBall,
    FullSpaceCone,
    Hyperbolic,
    L1Ball,
    PBall,
    Ray,
    ShiftedUnitBall,
    Simplex,
    ZeroCone,
    as_vector,
    contains,
    project,
    project_recession,
    recession_distance,
    set_from_spec,
    support_function,
)

__version__ = "0.1.0"

__all__ = [
    "BallPen",
    "BallPlusHalfAxisStrip",
    "BisectionTrace",
    "Box",
    "Branch",
    "CapabilityMissing",
    "CenterOutsideRadius",
    "Cone",
    "ConePoint",
    "ConvexSet",
    "DimensionMismatch",
    "Ellipsoid",
    "EuclideanBall",
    "FullSpaceCone",
    "HomconeError",
    "Hyperbolic",
    "InvalidSetSpec",
    "L1Ball",
    "MaxIterationsExceeded",
    "NegativeAlpha",
    "NoClosedFormAvailable",
    "NonPositiveAlpha",
    "OracleConfig",
    "PBall",
    "PolarDescription",
    "ProjectionResult",
    "PsiEvaluator",
    "QuarticCoefficients",
    "Ray",
    "ShiftedUnitBall",
    "Simplex",
    "TraceRow",
    "UnsupportedProjection",
    "ZeroCone",
    "as_vector",
    "brute_force_alpha_star",
    "closed_form_polar",
    "contains",
    "find_alpha_star",
    "homogenization_polar_membership",
    "polar_cone_membership",
    "polar_membership",
    "project",
    "project_ball_pen",
    "project_homogenization",
    "project_ice_cream",
    "project_recession",
    "psi_prime_plus_zero_ball",
    "quartic_coefficients",
    "recession_distance",
    "reference_trace",
    "sample_members",
    "sampled_support",
    "set_from_spec",
    "support_function",
]
