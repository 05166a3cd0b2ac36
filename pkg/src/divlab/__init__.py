"""divlab: exact divisor-window counts, divisor clustering measures, prime
block partitions, and order-statistic barrier probabilities at desk scale."""

from .blocks import PrimePartition, block_index, build_partition, empirical_K
from .cluster import (
    ClusterStats,
    IntervalUnion,
    LemmaLReport,
    LWReport,
    aggregate_LW,
    cluster_set,
    lemmaL_check,
    subsetsum_measure,
    trunc_S,
    trunc_T,
)
from .errors import (
    DivlabError,
    InsufficientTableError,
    OracleLimitError,
    RangeError,
    ResourceLimitError,
)
from .factor import (
    Factorization,
    PrimeTable,
    count_rough,
    factorize,
    mertens_sum,
    sieve_primes,
    split_squarefull,
    squarefree_smooth_stream,
)
from .identities import (
    CompositionVec,
    abel_identity,
    combsum_check,
    cycle_rotation,
    cycle_sum_check,
    f_of_b,
    s_zero_sum,
)
from .orderstats import (
    Boundary,
    MCEstimate,
    bound_ratios,
    q_exact,
    q_mc,
    q_oracle,
    smirnov_limit,
    u_statistic_mc,
    u_statistic_quadrature,
    volT_mc,
    volT_quadrature,
)
from .window import (
    DELTA,
    DensityPoint,
    SandwichReport,
    WindowQuery,
    count_window,
    count_window_oracle,
    mult_table_count,
    normalized_density,
    sandwich_check,
    tau_window,
)

__version__ = "0.1.0"
