"""Semi-supervised k-means++ seeding, constrained Lloyd iterations, expected-cost
bounds and a Monte Carlo benchmark harness."""

from .datagen import (
    GAUSSIAN_MIXTURE,
    IRIS_LIKE_MIXTURE,
    LabeledDataset,
    MixtureSpec,
    generate_mixture,
    load_csv,
    load_iris,
    sample_supervision,
    write_csv,
)
from .geometry import (
    CenterSet,
    centroid,
    d_squared,
    optimal_cluster_partition,
    potential,
    squared_distance,
)
from .harness import (
    ExperimentConfig,
    SweepReport,
    gm_preset,
    iris_preset,
    report_bound,
    run_once,
    run_sweep,
)
from .lloyd import Assignment, LloydResult, assign, is_non_increasing, lloyd_iterate, update_centers
from .metrics import (
    MetricsRecord,
    adjusted_rand_index,
    cost,
    fraction_of_optimal,
    optimal_cost_proxy,
)
from .seeding import (
    PartialLabeling,
    constrained_init,
    d2_sample,
    kmeanspp_init,
    ss_kmeanspp_init,
    true_centroid_init,
    uniform_init,
)
from .theory import (
    d2_center_check,
    exemplar_mean_factor,
    exemplar_mean_oracle,
    seeding_bound,
    subset_moment_oracles,
)

__version__ = "0.1.0"
