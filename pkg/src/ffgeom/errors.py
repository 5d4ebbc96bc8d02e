"""Exception hierarchy shared by every ffgeom module."""


class FFGeomError(Exception):
    """Base class for domain errors raised by ffgeom."""


class ZeroInput(FFGeomError, ValueError):
    pass


class ZeroDenominator(FFGeomError, ZeroDivisionError):
    pass


class NotFiniteTail(FFGeomError, ValueError):
    """The fractional part has a denominator that is not a power of x."""


class EmptyVector(FFGeomError, ValueError):
    pass


class ParseError(FFGeomError, ValueError):
    def __init__(self, text, offset, expected):
        self.text = text
        self.offset = offset
        self.expected = expected
        super().__init__(f"at offset {offset}: expected {expected} in {text!r}")


class SingularMatrix(FFGeomError, ValueError):
    pass


class DimensionMismatch(FFGeomError, ValueError):
    pass


class BadDimensions(FFGeomError, ValueError):
    pass


class NotSquare(FFGeomError, ValueError):
    pass


class NotUnimodular(FFGeomError, ValueError):
    pass


class BadWeight(FFGeomError, ValueError):
    pass


class BadThreshold(FFGeomError, ValueError):
    pass


class PrecisionTooLow(FFGeomError, ValueError):
    pass


class DependentVectors(FFGeomError, ValueError):
    pass


class NotFoundAtCap(FFGeomError):
    """No well-rounding weight was found inside the search ball.

    This is a budget signal: such a weight always exists, it just lies
    outside ``cap``.  ``best`` is the weight with the fewest distinct
    minima seen during the search.
    """

    def __init__(self, cap, best=None):
        self.cap = cap
        self.best = best
        super().__init__(f"no well-rounding weight with |a|_inf <= {cap}")
