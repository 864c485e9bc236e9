"""Optimum PI tuning for first-order time-delay processes.

The closed-loop setpoint response of a PI loop around ``K e^{-Ls}/(1+Tp s)``
is solved exactly, interval by interval, and the tuning that minimises the
integral squared error under overshoot limits is located on the resulting
performance curves.
"""

from .errors import (
    InfeasibleError,
    InvalidParameterError,
    NumericalError,
    PiTuneError,
    RangeError,
    RegimeError,
    RuleRangeError,
)
from .model import (
    Gains,
    NoDelayGains,
    NormalizedPlant,
    PiController,
    PlantModel,
    denormalize,
    normalize,
)
from .steps import PerformanceIndexes, PiecewiseSolution, SampledResponse, indexes, solve_steps
from .stability import hi_bounds, phase_margin, ultimate_gain
from .rules import apply_rule
from .optimizer import find_optimum, trace_curve

__all__ = [
    "Gains",
    "InfeasibleError",
    "InvalidParameterError",
    "NoDelayGains",
    "NormalizedPlant",
    "NumericalError",
    "PerformanceIndexes",
    "PiController",
    "PiTuneError",
    "PiecewiseSolution",
    "PlantModel",
    "RangeError",
    "RegimeError",
    "RuleRangeError",
    "SampledResponse",
    "apply_rule",
    "denormalize",
    "find_optimum",
    "hi_bounds",
    "indexes",
    "normalize",
    "phase_margin",
    "solve_steps",
    "trace_curve",
    "ultimate_gain",
]
