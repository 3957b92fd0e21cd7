"""Exception hierarchy shared by every module in the package."""


class MinRegionError(Exception):
    """Base class for all errors raised by minregion."""


class InvalidInput(MinRegionError, ValueError):
    """Non-finite values, bad dimensions, or non-positive parameters."""


class OutOfDomain(MinRegionError, ValueError):
    """A point lies outside the closed balls where the angle functions live."""


class UnsupportedDimension(MinRegionError, ValueError):
    pass


class SingularSystem(MinRegionError, ArithmeticError):
    pass


class Infeasible(MinRegionError, ValueError):
    """No quadratic with the requested minimizer, curvature and gradient exists.

    ``condition`` is ``"i"`` when the point lies outside the ball of radius
    ``||g|| / sigma`` and ``"ii"`` when the gradient angle is not admissible.
    """

    def __init__(self, condition, message):
        super().__init__(f"condition ({condition}) violated: {message}")
        self.condition = condition


class NotInInner(MinRegionError, ValueError):
    pass


class InsufficientMargin(MinRegionError, ValueError):
    pass


class RegionEmpty(MinRegionError, ValueError):
    pass
