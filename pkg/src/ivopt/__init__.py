"""Interval arithmetic, gH-calculus and optimality checks for interval optimization."""
from .interval import (
    MINUS_INF,
    PLUS_INF,
    ZERO,
    Dominance,
    Interval,
    IntervalError,
    IntervalVector,
    compare,
    gh_sub,
    norm,
    prec,
    preceq,
)
from .ivf import Box, ExtendedIvf, Ivf, indicator
from .calculus import DiffConfig, active_set, dir_derivative_of_max, gh_dir_derivative, gh_gradient
from .subdiff import Singleton, ScaledSum, contains, contains_zero, distance, is_subgradient
from .optimality import (
    CheckReport,
    Iop,
    MultiplierGrid,
    Status,
    composite_check,
    fermat_check,
    fritz_john_check,
    is_efficient_oracle,
    is_weak_efficient_oracle,
    kkt_check,
    slater_check,
    tstar_build,
    weak_efficient_set,
)

__version__ = "0.1.0"
