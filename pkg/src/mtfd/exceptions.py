"""Exception hierarchy shared across the package.

The split mirrors the CLI exit codes: configuration problems, numerical
failures, and violated mathematical hypotheses are distinct failure modes
and callers are expected to handle them differently.
"""


class MtfdError(Exception):
    """Base class for all package errors."""


class ConfigError(MtfdError):
    """Invalid user input: bad parameters, malformed files, grid mismatches."""


class NumericalError(MtfdError):
    """A numerical procedure failed: divergent sums, contour breakdown,
    non-convergent eigensolver, under-resolved time steps."""


class HypothesisViolation(MtfdError):
    """A mathematical hypothesis required by the method does not hold for
    the given data (e.g. vanishing sensitivity at the monitoring point,
    rank condition failures, ratio not in the eigenvalue-ratio set)."""


class RankConditionError(HypothesisViolation):
    """An eigenfunction vanishes at the monitoring point, so the requested
    mode cannot be observed or constructed there."""


class SignalBelowFloor(HypothesisViolation):
    """The observable part of the data is below the configured residual
    floor; there is nothing to fit."""


class AmbiguousExponent(HypothesisViolation):
    """A fitted exponent matches both a new-order slot and a predicted
    correction slot within tolerance; the classification is reported
    rather than guessed."""

    def __init__(self, message, exponent=None, candidates=None):
        super().__init__(message)
        self.exponent = exponent
        self.candidates = candidates or []


class IllConditionedSystem(NumericalError):
    """A least-squares system exceeded the conditioning limit.  Carries the
    number of modes that can be recovered reliably."""

    def __init__(self, message, achievable_modes=None):
        super().__init__(message)
        self.achievable_modes = achievable_modes
