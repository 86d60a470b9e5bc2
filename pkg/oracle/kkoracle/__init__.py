"""High-precision golden-vector generator.

Produces the JSON reference file the float64 series package checks
itself against.  Pure mpmath; deliberately independent of that package,
sharing only the file schema.
"""

from .hp import (
    OracleTailError,
    beta_hp,
    digamma_hp,
    dirichlet_sum_hp,
    dm_da_hp,
    dm_db_hp,
    gamma_weight_hp,
    kk_sum_hp,
    kummer_hp,
    lgamma_hp,
    phase_hp,
)
from .vectors import (
    OracleGateError,
    SCHEMA_KEYS,
    TOLS,
    gen_kernels,
    gen_series,
    write_goldens,
)

__all__ = [
    "OracleGateError",
    "OracleTailError",
    "SCHEMA_KEYS",
    "TOLS",
    "beta_hp",
    "digamma_hp",
    "dirichlet_sum_hp",
    "dm_da_hp",
    "dm_db_hp",
    "gamma_weight_hp",
    "gen_kernels",
    "gen_series",
    "kk_sum_hp",
    "kummer_hp",
    "lgamma_hp",
    "phase_hp",
    "write_goldens",
]
