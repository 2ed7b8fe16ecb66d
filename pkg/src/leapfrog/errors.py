"""Exception hierarchy.

Input problems derive from :class:`InvalidInput` (a ``ValueError``); failures
that happen while computing derive from :class:`ComputationError`. The CLI
maps the first family to exit status 2 and the second to exit status 1.
"""


class LeapfrogError(Exception):
    """Base class for every error raised by the package."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidInput(LeapfrogError, ValueError):
    pass


class ComputationError(LeapfrogError, RuntimeError):
    pass


class OverlappingFilaments(InvalidInput):
    pass


class InfeasibleInvariant(InvalidInput):
    pass


class InvariantMismatch(InvalidInput):
    pass


class DomainViolation(InvalidInput):
    pass


class SingularPoint(InvalidInput):
    pass


class AlphaOutOfRange(InvalidInput):
    pass


class GammaOutOfRange(InvalidInput):
    pass


class OutOfTheoremScope(InvalidInput):
    pass


class CoincidentVortices(InvalidInput):
    pass


class FilamentContact(InvalidInput):
    pass


class SingularityApproach(ComputationError):
    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class StepSizeUnderflow(ComputationError):
    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class Inconclusive(ComputationError):
    pass


class NotClosed(ComputationError):
    pass
