"""Exact-arithmetic engine for Virasoro conformal blocks, Nekrasov-type
combinatorial sums, and Painleve tau-function Fourier-Laurent series.

Everything on the exact path runs over arbitrary-precision rationals
(gmpy2.mpq), optionally extended by sqrt(2); the numeric path runs on
decimal floats with explicit precision bookkeeping.
"""

__version__ = "0.1.0"

from .partitions import partition_data, enumerate_partitions, skew_contains, skew_cells
from .scalars import QQ, QuadExt, ParameterPoint, NonGenericPoint, pit_check
from .gammafun import gamma_hp, barnes_shift_ratio

__all__ = [
    "partition_data",
    "enumerate_partitions",
    "skew_contains",
    "skew_cells",
    "QQ",
    "QuadExt",
    "ParameterPoint",
    "NonGenericPoint",
    "pit_check",
    "gamma_hp",
    "barnes_shift_ratio",
    "TauFamily",
    "tau_series",
    "ode_residual",
    "agt_equivalence_check",
    "icb_series",
    "four_point_block",
    "block_sum",
    "NekrasovKind",
    "solve_c",
]


def __getattr__(name):
    # heavier subsystems load lazily so `import taublocks` stays light
    if name in ("TauFamily", "tau_series", "ode_residual"):
        from . import tau
        return getattr(tau, name)
    if name in ("agt_equivalence_check", "block_sum", "NekrasovKind"):
        from . import nekrasov
        return getattr(nekrasov, name)
    if name == "icb_series":
        from .whittaker import icb_series
        return icb_series
    if name == "four_point_block":
        from .verma import four_point_block
        return four_point_block
    if name == "solve_c":
        from .skew import solve_c
        return solve_c
    raise AttributeError(name)
