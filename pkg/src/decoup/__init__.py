"""Constructive machinery for l2-decoupling experiments with polynomial
phases on [0,1]: admissible partitions, curvature sublevel analysis,
neighborhood geometry, lattice decoupling-ratio estimation, and exact
unrolling of the induction-on-scales recursions."""

from .errors import (
    BudgetExceeded,
    DecoupError,
    IncompatibleShear,
    InternalInvariantError,
    LinearPhaseError,
    NotAdmissibleCell,
    NotSubAdmissible,
    NyquistViolation,
    PreconditionViolated,
    QuadratureBudgetExceeded,
    RootIsolationError,
)
from .estimator import (
    BadSetSplit,
    DecouplingReport,
    TrialSpec,
    calibrate_const,
    decoupling_ratio,
    decoupling_ratios,
    mean_value_count,
    split_by_badset,
)
from .fields import (
    FieldMeta,
    GridField,
    GridSpec,
    default_grid,
    extension_values,
    lp_norm,
    lp_norms,
    sample_extension,
    shear_transform,
    truncate,
)
from .intervals import UNIT, Interval
from .neighborhoods import (
    CapParallelogram,
    DualRect,
    MinkowskiReport,
    NeighborhoodSpec,
    cap_parallelogram,
    minkowski_contained,
    truncation_overlap,
)
from .partitions import (
    DyadicBlock,
    Partition,
    TilingResult,
    canonical_partition,
    coarsen_pairs,
    count_within_bound,
    dyadic_blocks,
    greedy_partition,
    has_property_p,
    is_admissible,
    is_sub_admissible,
    is_super_admissible,
    refine_partition,
    tile,
    trivial_partition,
)
from .phases import (
    AffineNormalization,
    BadSet,
    MembershipReport,
    PolyPhase,
    SublevelParams,
    SupBound,
    bad_set,
    check_class_membership,
    eval_deriv,
    markov_coeff_bound,
    normalize_vertical,
    rescale_to_unit,
    sup_abs_deriv,
    taylor_quadratic,
    taylor_remainder_check,
)
from .recursion import (
    PowTerm,
    RecursionTrace,
    TraceStep,
    geometric_exponent_sum,
    iterate_nonzero,
    unroll_main,
)

__version__ = "0.1.0"
