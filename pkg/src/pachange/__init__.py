"""pachange: preferential-attachment changepoint laboratory.

Generation of shift-changepoint preferential-attachment graphs (compiled
kernels with a pure-Python fallback), an exact enumeration oracle for the
hidden-arrival-order likelihood ratio, the minimum-degree detection test and
calibration estimator, and the Monte-Carlo experiments around them.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .branching import ExplorationTrace, OffspringLaw, explore_component, sample_tree_size, tail_bound
from .components import (
    Component,
    ComponentForest,
    LikelihoodReport,
    OrderCount,
    admissible_order_counts,
    c1,
    late_components,
    likelihood_ratio,
    s_statistic,
    x_factor,
)
from .encoding import EncodedRandomness, decode, draw_randomness, resample_one
from .model import (
    AttachmentRecord,
    DeltaSchedule,
    EvolvingGraph,
    GrowthConfig,
    attachment_distribution,
    degree_histogram,
    grow,
    kappa,
    schedule_from_gamma,
)
from .oracle import HistoryAtom, conditional_snapshot_law, enumerate_histories, exact_lr
from .stats import (
    CalibrationCurve,
    PowerReport,
    build_calibration_curve,
    calibrate_threshold,
    estimate_changepoint,
    estimate_power,
    min_degree_statistic,
    tv_lower_bound,
    variance_of_S,
)

__all__ = [
    "BACKEND",
    "__version__",
    "AttachmentRecord",
    "CalibrationCurve",
    "Component",
    "ComponentForest",
    "DeltaSchedule",
    "EncodedRandomness",
    "EvolvingGraph",
    "ExplorationTrace",
    "GrowthConfig",
    "HistoryAtom",
    "LikelihoodReport",
    "OffspringLaw",
    "OrderCount",
    "PowerReport",
    "admissible_order_counts",
    "attachment_distribution",
    "build_calibration_curve",
    "c1",
    "calibrate_threshold",
    "conditional_snapshot_law",
    "decode",
    "degree_histogram",
    "draw_randomness",
    "enumerate_histories",
    "estimate_changepoint",
    "estimate_power",
    "exact_lr",
    "explore_component",
    "grow",
    "kappa",
    "late_components",
    "likelihood_ratio",
    "min_degree_statistic",
    "resample_one",
    "s_statistic",
    "sample_tree_size",
    "schedule_from_gamma",
    "tail_bound",
    "tv_lower_bound",
    "variance_of_S",
    "x_factor",
]
