"""secantlab: a root-finding laboratory for the secant and Newton methods.

The package traces both iterations with full error/ratio columns under two
precision backends, solves the characteristic constants of the error-ratio
recursion exactly, estimates convergence orders and error constants from
traces, and classifies initial values for convergence near multiple roots.
"""

from .backends import DD, Binary64, DoubleDouble, get_backend
from .charpoly import char_constants, h_map, h_prime, p_poly, q_poly
from .dynamics import basin_sweep, classify_even, classify_odd, iterate_ratio
from .fibonacci import binet, fib, fib_shift_identity, golden_constants
from .iterate import (
    IterationTrace,
    StoppingCriteria,
    Termination,
    run_newton,
    run_secant,
)
from .problems import builtin_corpus, curvature_ratio, get_problem

__version__ = "0.1.0"

__all__ = [
    "Binary64",
    "DD",
    "DoubleDouble",
    "IterationTrace",
    "StoppingCriteria",
    "Termination",
    "basin_sweep",
    "binet",
    "builtin_corpus",
    "char_constants",
    "classify_even",
    "classify_odd",
    "curvature_ratio",
    "fib",
    "fib_shift_identity",
    "get_backend",
    "get_problem",
    "golden_constants",
    "h_map",
    "h_prime",
    "iterate_ratio",
    "p_poly",
    "q_poly",
    "run_newton",
    "run_secant",
    "__version__",
]
