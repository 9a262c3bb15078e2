"""Exception types raised by the library."""


class CounterbeliefError(Exception):
    """Base class for all errors raised by this package."""


class ModelFormatError(CounterbeliefError):
    """A model or trajectory file could not be parsed into the expected shape."""


class ModelValidationError(CounterbeliefError):
    """A model violates one or more structural invariants.

    ``violations`` holds one human-readable message per violated invariant.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ImpossibleObservation(CounterbeliefError):
    """The belief update is undefined: the observation has zero likelihood
    under the predicted belief."""


class InconsistentAction(CounterbeliefError):
    """An observed action carries zero probability under every reachable
    belief at some step, so the filter posterior is undefined there."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"observed action at step {step} is impossible under the model")


class InconsistentEvidence(CounterbeliefError):
    """Forward and backward evidence assign zero joint mass at some step."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"zero total evidence mass at step {step}")


class EnumerationTooLarge(CounterbeliefError):
    """The brute-force enumeration would exceed the configured sequence cap."""


class GraphMismatch(CounterbeliefError):
    """Internal consistency failure: an exactly-chained belief does not lie
    within the dedup tolerance of any node in the expected graph layer."""
