"""Dimension bounds and sampling-imbalance verification for set families."""

from .dimension import (
    UiResult,
    VcResult,
    check_ui_vc_inequality,
    ui_dimension_exact,
    vc_dimension_exact,
    vc_limit_from_ui,
)
from .errors import InfeasibleError, ParseError, UidimError, ValidationError
from .family import (
    BoundednessReport,
    GroundSet,
    SetFamily,
    family_from_masks,
    ground_set,
    is_chain,
    is_d_bounded,
    make_family,
    min_boundedness,
    restrict,
    subtract,
)
from .rademacher import (
    RadReport,
    massart_bound,
    rademacher_exact,
    rademacher_mc,
    slice_bound,
    vc_rad_bound,
)
from .rules import (
    BoundDerivation,
    ChainLeaf,
    DeterministicLeaf,
    ExplicitLeaf,
    FamilyExpr,
    IntersectNode,
    UnionNode,
    eval_bound,
    expand,
    halfline_family,
    quarterplane_family,
    random_family_expr,
    two_axis_union,
    verify_bound,
)
from .sampling import (
    Coloring,
    ImbalanceRecord,
    TrialBatch,
    binomial_failure_exact,
    color_population,
    hoeffding_failure_bound,
    interval_best_ratio,
    interval_worst_imbalance,
    simulate_deterministic,
    simulate_quarterplane,
    simulate_random_set,
    sqln,
    trial_seed,
    worst_imbalance,
)

__version__ = "0.1.0"

__all__ = [
    "BoundDerivation",
    "BoundednessReport",
    "ChainLeaf",
    "Coloring",
    "DeterministicLeaf",
    "ExplicitLeaf",
    "FamilyExpr",
    "GroundSet",
    "ImbalanceRecord",
    "InfeasibleError",
    "IntersectNode",
    "ParseError",
    "RadReport",
    "SetFamily",
    "TrialBatch",
    "UidimError",
    "UiResult",
    "UnionNode",
    "ValidationError",
    "VcResult",
    "binomial_failure_exact",
    "check_ui_vc_inequality",
    "color_population",
    "eval_bound",
    "expand",
    "family_from_masks",
    "ground_set",
    "halfline_family",
    "hoeffding_failure_bound",
    "interval_best_ratio",
    "interval_worst_imbalance",
    "is_chain",
    "is_d_bounded",
    "make_family",
    "massart_bound",
    "min_boundedness",
    "quarterplane_family",
    "rademacher_exact",
    "rademacher_mc",
    "random_family_expr",
    "restrict",
    "simulate_deterministic",
    "simulate_quarterplane",
    "simulate_random_set",
    "slice_bound",
    "sqln",
    "subtract",
    "trial_seed",
    "two_axis_union",
    "ui_dimension_exact",
    "vc_dimension_exact",
    "vc_limit_from_ui",
    "vc_rad_bound",
    "verify_bound",
    "worst_imbalance",
]
