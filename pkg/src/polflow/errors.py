"""Exception types shared across the package."""


class PolflowError(Exception):
    """Base class for domain errors raised by polflow."""


class InvalidDistribution(PolflowError):
    """A probability vector is not strictly positive or does not sum to 1."""


class NotInterior(PolflowError):
    """Coordinates lie outside the open solid simplex."""


class NotOnFacet(PolflowError):
    """Coordinates are not on the interior of exactly one facet."""


class UnsupportedDimension(PolflowError):
    """An operation restricted to a fixed dimension received another one."""


class InvalidStep(PolflowError):
    """A non-positive integration step or tolerance."""


class NoConvergence(PolflowError):
    """An iterative solve failed to reach the requested tolerance."""


class NotAFixedPoint(PolflowError):
    """Classification requested at a point where the field is not zero."""


class NonPositiveState(PolflowError):
    """Lotka-Volterra state components must stay strictly positive."""


class BoundaryState(PolflowError):
    """A replicator evaluation hit the simplex boundary."""


class DimensionMismatch(PolflowError):
    """Two inputs that must share a category count do not."""


class OutOfPolytope(PolflowError):
    """Sufficient-statistic values outside the marginal polytope."""
