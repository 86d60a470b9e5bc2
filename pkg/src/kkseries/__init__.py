"""Kapteyn-Kummer series of confluent hypergeometric functions.

Evaluation by independent routes (direct summation, a Dirichlet-series
reduction, and a master integral representation) with certified error
estimates, plus region diagnostics and a small CLI.
"""

__version__ = "0.1.0"

from .dirichlet import (
    CountingAccumulator,
    PtValue,
    counting_sum,
    dirichlet_cahen,
    dirichlet_direct,
    growth_constant,
    kk_via_dirichlet,
    pt,
)
from .errors import (
    ConsistencyError,
    DivergenceError,
    DomainError,
    GoldenFormatError,
    IntegrandError,
    RegionError,
)
from .goldens import GoldenVector, check_vector, evaluate_vector, load_goldens
from .master import (
    MasterBlocks,
    dgamma0,
    gamma_rho,
    j_closed_form,
    j_integral,
    kk_case_A,
    kk_case_B,
    kk_case_C,
    kk_case_D,
    kk_master,
    master_blocks,
)
from .kernels import (
    KdFSpec,
    beta,
    digamma,
    dm_da,
    dm_db,
    kdf_eval,
    kummer_m_integral,
    kummer_m_series,
    ln_gamma,
    pochhammer,
)
from .quadrature import EvalReport, QuadSpec, integrate_semiinf_unitwise, integrate_unit
from .series import (
    CoeffFn,
    ConvergenceRegion,
    KKParams,
    convergence_region,
    delta_family,
    expdecay_family,
    geometric_family,
    kk_bound,
    kk_direct,
    parse_coeff_spec,
    polygeom_family,
)

__all__ = [
    "CoeffFn",
    "ConsistencyError",
    "ConvergenceRegion",
    "CountingAccumulator",
    "DivergenceError",
    "DomainError",
    "EvalReport",
    "GoldenFormatError",
    "GoldenVector",
    "IntegrandError",
    "KKParams",
    "KdFSpec",
    "MasterBlocks",
    "PtValue",
    "QuadSpec",
    "RegionError",
    "__version__",
    "beta",
    "check_vector",
    "convergence_region",
    "counting_sum",
    "evaluate_vector",
    "delta_family",
    "dgamma0",
    "digamma",
    "dirichlet_cahen",
    "dirichlet_direct",
    "dm_da",
    "dm_db",
    "expdecay_family",
    "gamma_rho",
    "geometric_family",
    "growth_constant",
    "integrate_semiinf_unitwise",
    "integrate_unit",
    "j_closed_form",
    "j_integral",
    "kdf_eval",
    "kk_bound",
    "kk_case_A",
    "kk_case_B",
    "kk_case_C",
    "kk_case_D",
    "kk_direct",
    "kk_master",
    "kk_via_dirichlet",
    "kummer_m_integral",
    "kummer_m_series",
    "ln_gamma",
    "load_goldens",
    "master_blocks",
    "parse_coeff_spec",
    "pochhammer",
    "pt",
    "polygeom_family",
]
