"""Exception hierarchy shared across the package."""


class KThetaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidModulus(KThetaError):
    """The modulus tau does not lie in the upper half-plane."""


class TailNotConverged(KThetaError):
    """The truncation window hit ``max_terms`` before the tail bound met epsilon."""


class ShiftSumNonzero(KThetaError):
    """A product of shifted theta factors requires shifts summing to zero."""


class IllConditioned(KThetaError):
    """A least-squares sample matrix is numerically singular."""


class EquivalentPoints(KThetaError):
    """Two points coincide on the quotient manifold."""


class SearchFailed(KThetaError):
    """Bounded seeded retries were exhausted without meeting the target."""


class AllSectionsVanish(KThetaError):
    """Every homogeneous coordinate vanished; the lift is unusable."""


class DimensionMismatch(KThetaError):
    """Projective points of different dimensions cannot be compared."""


class TorusNotClosed(KThetaError):
    """The parametrized square does not close up on the quotient."""


class NonCommutingPair(KThetaError):
    """The two group words do not commute, so they span no torus."""
