"""conerank: exact cone-based ranking for multi-criteria decision making."""

from .geometry import (
    GeometryError,
    ImproperConeError,
    NoInteriorError,
    NotPointedError,
    PolyhedralCone,
    WeightBounds,
    cone_from_config,
    cone_from_weight_bounds,
    dual_cone,
    leq_cone,
    lt_cone,
)
from .ranking import (
    AlternativeSet,
    LabeledPoint,
    RankResult,
    RankingInputError,
    oracle_rank_all,
    rank_all,
    rank_cone,
    rank_cone_oracle,
    rank_w,
)
from .set_ranking import indicator_cx, refinement_check, set_dominates, set_rank, set_rank_w
from .analysis import (
    check_max_rank_maximality,
    detect_reversals,
    flag_outliers,
    pareto_maximal,
    peel_ranking,
)
from .classify import (
    ClassificationModel,
    LabeledSet,
    LevelSetQuery,
    align_cone_svm,
    alpha_best,
    cluster_gbu,
    fit_threshold,
    level_member,
    propagate_labels,
)
from .baselines import TopsisConfig, topsis_rank, weighted_sum_rank

__version__ = "0.1.0"
