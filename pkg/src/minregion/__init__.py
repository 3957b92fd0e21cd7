"""Region of possible minimizers of the sum of two strongly convex functions."""

from .errors import (
    InsufficientMargin,
    Infeasible,
    InvalidInput,
    MinRegionError,
    NotInInner,
    OutOfDomain,
    RegionEmpty,
    SingularSystem,
    UnsupportedDimension,
)
from .federated import AggregationResult, fed_point, min_gradient_bound
from .geometry import (
    AngleReport,
    CanonicalFrame,
    ProblemInstance,
    angle_report,
    canonical_frame,
    from_canonical,
    to_canonical,
)
from .oracle import VerificationReport, fd_gradient_check, mc_completeness, mc_soundness, sample_quadratic
from .quadwit import (
    QuadraticFunction,
    WitnessPair,
    admissible_angles,
    construct_quadratic,
    construct_quadratic_2d,
    sum_minimizer,
    witness_family,
    witness_pair,
)
from .region import Case, Membership, Piece, RegionRegime, Value, classify, in_inner, in_outer, regime, t_residual
from .trace import BoundaryTrace, trace_boundary

__version__ = "0.1.0"
