"""Exception and warning types raised by spectral_dn."""


class SpectralDNError(Exception):
    """Base class for all library errors."""


# geometry
class GeometryError(SpectralDNError, ValueError):
    pass


class TooFewVertices(GeometryError):
    pass


class DegenerateEdge(GeometryError):
    pass


class NonConvex(GeometryError):
    pass


class OutOfRange(SpectralDNError, ValueError):
    pass


# transforms and evaluation
class QuadratureUnderResolved(SpectralDNError):
    pass


class EvaluationOverflow(SpectralDNError, OverflowError):
    """An exponential factor would exceed the double precision range."""


class MissingData(SpectralDNError, ValueError):
    pass


class NonRealData(SpectralDNError, ValueError):
    pass


# solvers
class InvalidResolution(SpectralDNError, ValueError):
    pass


class AssemblyOverflow(EvaluationOverflow):
    pass


class SingularSystem(SpectralDNError):
    pass


class RankDeficient(SpectralDNError):
    pass


class TooCloseToBoundary(SpectralDNError, ValueError):
    pass


class ConfigError(SpectralDNError, ValueError):
    pass


class IllConditionedWarning(UserWarning):
    """Emitted when a linear system's condition estimate exceeds 1e12."""
