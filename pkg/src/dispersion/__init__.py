"""Euclidean gamma-dispersion: greedy and seed-and-grow approximations with an exhaustive oracle."""

from .core import (
    BudgetExceeded,
    DispersionError,
    Instance,
    InvalidInstance,
    Method,
    Mode,
    NoSolution,
    Point,
    Solution,
    TooFewNeighbors,
    UnsupportedRegime,
    cost_point,
    cost_set,
    dist,
    nearest_indices,
)
from .instances import Family, GeneratorSpec, generate, read_instance, write_instance
from .solvers import (
    FrameworkState,
    brute_force_opt,
    framework_grow,
    framework_solve,
    greedy_dispersion,
    lambda_for,
    solve,
)

__version__ = "0.1.0"
