"""Exception hierarchy shared by the curve, metric and schedule modules."""


class AMMError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AMMError, ValueError):
    """A reserve value falls outside the active curve's valid domain."""


class InsufficientPoolX(DomainError):
    """The pool cannot supply the requested amount of X."""


class InsufficientPoolY(DomainError):
    """The pool cannot pay out the Y owed for an X sale."""


class StaleQuote(AMMError):
    """A quote is applied to a pool state other than the one it was built on."""


class NonPositivePrice(AMMError, ValueError):
    pass


class DegeneratePool(AMMError, ValueError):
    pass


class ZeroBaseValue(AMMError, ZeroDivisionError):
    pass


class NonPositiveRho(AMMError, ValueError):
    pass


class IndexOutOfRange(AMMError, IndexError):
    pass
