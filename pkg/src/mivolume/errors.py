"""Exception types raised across the package."""


class GeometryError(ValueError):
    """Base class for invalid geometric input or unreachable constructions."""


class UnboundedPolytope(GeometryError):
    pass


class EmptyPolytope(GeometryError):
    pass


class DegenerateInput(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class FiberBudgetExceeded(GeometryError):
    pass


class ZeroTotalVolume(GeometryError):
    pass


class ZeroDirection(GeometryError):
    pass


class ApexInBasePlane(GeometryError):
    pass


class InvalidHeight(GeometryError):
    pass


class UnboundedResult(GeometryError):
    pass


class NoIntegralCentroidReachable(GeometryError):
    pass


class BallTooSmall(GeometryError):
    pass


class InputNotInBody(GeometryError):
    pass


class HypothesisNotMet(GeometryError):
    """A lemma's hypotheses fail on the given instance."""


class SearchBudgetExceeded(GeometryError):
    pass


class BadParams(GeometryError):
    pass
