"""Coalition formation over proportional resource sharing with an adamant
outsider: partition calculus, closed-form equilibrium utilities, exhaustive
Nash search, social optima, and the price of anarchy."""

from .model import (
    CPartition,
    Coalition,
    GameConfig,
    PartitionLabel,
    PartitionOutcome,
    StrategyProfile,
    alone_profile,
    canonical_generating_profile,
    canonicalize_profile,
    classify,
    coalition,
    format_partition,
    format_profile,
    is_significant,
    make_config,
    parse_partition,
    parse_profile,
    profile,
)
from .partitions import (
    FormedPartitions,
    MutualGraph,
    all_partitions,
    deviation_partition,
    formed_partitions,
    is_better,
    is_weak_criterion,
    is_weak_exact,
)
from .solver import (
    ActionProfile,
    NonConvergence,
    ShareVector,
    adamant_action,
    adamant_value,
    aggregate_action,
    coalition_sum,
    coalition_sum_k,
    coalition_utilities,
    coalition_value,
    numeric_equilibrium,
    oracle_deviation,
    player_share,
    profile_utility,
    share_value,
)
from .equilibrium import (
    BudgetExceeded,
    EquilibriumReport,
    best_response_set,
    enumerate_nash,
    is_nash,
    multi_partition_profile_count,
    no_multi_partition_nash,
    no_weak_ne_partition,
    partition_summary,
    price_of_anarchy,
    social_optimum,
)
from .report import ReportRecord, analyze

__version__ = "0.1.0"
