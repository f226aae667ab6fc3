"""Exception hierarchy shared across the package."""


class WalkGreenError(Exception):
    """Base class for all errors raised by walkgreen."""


class DomainError(WalkGreenError):
    """A point, dimension or parameter is outside the operation's domain."""


class TransienceError(DomainError):
    """The requested walk is not transient (d < 3, or d < 4 on a strip)."""


class CapabilityError(WalkGreenError):
    """Input exceeds a configured capability limit (e.g. Bessel order cap)."""


class ConvergenceError(WalkGreenError):
    """Requested tolerance was not reached.

    Carries the best estimate computed so far and the error bound that was
    actually achieved.
    """

    def __init__(self, message, best=None, achieved_bound=None):
        super().__init__(message)
        self.best = best
        self.achieved_bound = achieved_bound


class ConsistencyError(WalkGreenError):
    """Two internal evaluation paths disagree beyond their combined bounds."""


class SingularNetworkError(WalkGreenError):
    """The killed-walk linear system is singular (no absorbing boundary)."""


class ConfigError(WalkGreenError):
    """Invalid run configuration (walk counts, batches, variants...)."""
