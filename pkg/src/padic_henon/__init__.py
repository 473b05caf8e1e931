"""Exact-arithmetic toolkit for the backward dynamics of f(x, y) = (xy + c, x) on Q_p^2.

Modules:
    padics    exact rationals in Q_p, digit expansions, Hensel square roots
    fib       Fibonacci values, Cassini-type identities, golden-ratio comparisons
    dynamics  the map, its inverse, orbits with fate verdicts, fixed points
    regions   valuation-region classifier, samplers and the transition table
    gridcheck window-exhaustive partition and transition verification (numpy)
    measure   exact Haar measures of balls, spheres and region windows
    verifier  sampling campaigns and structured verification reports
    cli       command-line frontend
"""

from .padics import (
    NonSquareError,
    PadicRational,
    Point,
    TruncatedPadic,
    is_square,
    make_rational,
    norm_exponent,
    sample_with_norm,
    sqrt,
)
from .fib import cassini, cassini2, fib, golden_cmp
from .regions import (
    AbstractPreimage,
    EmptyRegionError,
    Regime,
    RegionLabel,
    abstract_inverse,
    classify,
    classify_point,
    expected_preimage_regions,
    sample_in_region,
)
from .dynamics import (
    BitBudgetError,
    MapParams,
    OrbitRecord,
    PrecisionExhaustedError,
    ProfileOrbitRecord,
    UndefinedInverseError,
    backward_orbit,
    backward_profile_orbit,
    exact_fixed_points,
    fixed_points,
    forward,
    forward_orbit,
    inverse,
    three_cycle,
)

__version__ = "0.1.0"

__all__ = [
    "PadicRational",
    "TruncatedPadic",
    "Point",
    "NonSquareError",
    "make_rational",
    "norm_exponent",
    "is_square",
    "sqrt",
    "sample_with_norm",
    "fib",
    "cassini",
    "cassini2",
    "golden_cmp",
    "Regime",
    "RegionLabel",
    "EmptyRegionError",
    "AbstractPreimage",
    "classify",
    "classify_point",
    "abstract_inverse",
    "expected_preimage_regions",
    "sample_in_region",
    "MapParams",
    "OrbitRecord",
    "ProfileOrbitRecord",
    "UndefinedInverseError",
    "BitBudgetError",
    "PrecisionExhaustedError",
    "forward",
    "inverse",
    "backward_orbit",
    "backward_profile_orbit",
    "forward_orbit",
    "fixed_points",
    "exact_fixed_points",
    "three_cycle",
    "__version__",
]
