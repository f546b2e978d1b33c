"""Exception hierarchy shared by all acsigma modules."""


class AcSigmaError(Exception):
    """Base class for every domain error raised by the library."""


class GeometryError(AcSigmaError):
    pass


class NotSimple(GeometryError):
    pass


class Degenerate(GeometryError):
    pass


class TooFewVertices(GeometryError):
    pass


class NotConvex(GeometryError):
    pass


class SingularAffine(GeometryError):
    pass


class VariationError(AcSigmaError):
    pass


class PointOutsideDomain(VariationError):
    pass


class NotCollinear(VariationError):
    pass


class NotInjectiveOnDomain(VariationError):
    pass


class MapError(AcSigmaError):
    pass


class BoundaryMismatch(MapError):
    pass


class NotInjective(MapError):
    pass


class ApexOutside(MapError):
    pass


class ImageNotSimple(MapError):
    """A validated map produced a non-simple image; always an internal bug."""


class PolygonAlgoError(AcSigmaError):
    pass


class EpsilonTooLarge(PolygonAlgoError):
    pass


class MarginTooSmall(PolygonAlgoError):
    pass


class InvalidRegion(PolygonAlgoError):
    pass


class ViolationFound(AcSigmaError):
    """A fuzz campaign found a counterexample to a proved inequality."""

    def __init__(self, message, seed=None, trial=None):
        super().__init__(message)
        self.seed = seed
        self.trial = trial


class ParseError(AcSigmaError):
    pass


class UnknownId(AcSigmaError):
    pass
