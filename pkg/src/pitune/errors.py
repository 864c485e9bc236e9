"""Exception hierarchy.

Validation problems derive from ``ValueError`` so callers that only care
about bad input can catch that; numerical failures derive from
``ArithmeticError``.  The CLI maps the two families to different exit codes.
"""


class PiTuneError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(PiTuneError, ValueError):
    pass


class RangeError(PiTuneError, ValueError):
    """Evaluation point outside the solved horizon or admissible region."""


class RuleRangeError(RangeError):
    """A tuning rule was asked for a ``tp`` outside its validity interval."""

    def __init__(self, rule, tp, interval):
        self.rule = rule
        self.tp = tp
        self.interval = interval
        lo, hi = interval
        super().__init__(f"rule {rule!r} is defined for tp in [{lo}, {hi}], got tp={tp}")


class RegimeError(PiTuneError, ValueError):
    """The requested closed form does not apply in this damping regime."""


class NumericalError(PiTuneError, ArithmeticError):
    pass


class RootFindingError(NumericalError):
    def __init__(self, message, bracket=None):
        self.bracket = bracket
        if bracket is not None:
            message = f"{message} (last bracket {bracket[0]!r}..{bracket[1]!r})"
        super().__init__(message)


class InfeasibleError(NumericalError):
    """No tuning satisfies the overshoot constraints."""
