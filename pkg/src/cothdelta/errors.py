"""Exception hierarchy."""


class CothDeltaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidEpsilon(CothDeltaError, ValueError):
    """Regularisation parameter outside the supported open interval."""


class SingularPoint(CothDeltaError, ValueError):
    """A classical limit function was evaluated at its singular point."""


class InvalidTestFunction(CothDeltaError, ValueError):
    """Bad test-function parameters or an unparseable test-function spec."""


class MaxIntervalsExceeded(CothDeltaError, RuntimeError):
    """Adaptive quadrature ran out of intervals before meeting tolerance."""


class NonCancelingSingularity(CothDeltaError, ValueError):
    """The symmetrised principal-value integrand blows up at the origin."""


class NoisyConvergence(CothDeltaError, RuntimeError):
    """Successive differences of an eps-sequence change sign in the tail."""


class DivergentPairing(CothDeltaError, RuntimeError):
    """A pairing grows without bound as eps -> 0."""
