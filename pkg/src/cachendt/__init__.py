"""Normalized delivery time (NDT) of cache-aided interference networks.

Exact rational bounds, the cache-splitting linear program, closed-form
region maps for small networks, a bit-level placement and delivery
simulator, and numerical checks of the zero-forcing / alignment precoders.
"""

from .core import (
    CachePoint,
    CacheStateIndex,
    NetworkConfig,
    SplitRatios,
    feasible_cache_point,
    index_set,
    validate_split,
)
from .lp import LinearProgram, LpSolution, solve, vertex_oracle
from .dof import DofCase, DofEntry, dof_table, per_user_dof, sum_dof
from .bounds import (
    InfeasibleCachePoint,
    NdtReport,
    gap,
    ndt_from_ratios,
    ndt_lower_coded,
    ndt_lower_uncoded,
    ndt_report,
    ndt_upper,
    optimality_check,
)
from .regions import RegionId, classify_2x2, classify_3x3, closed_form_2x2, closed_form_3x3
from .cachesim import simulate
from .phyverify import SchemeCase, build_scheme, verify_scheme

__version__ = "0.1.0"
