"""Exception hierarchy shared by all modules."""


class RieszError(Exception):
    """Base class for errors raised by :mod:`rieszmd`."""


class InvalidResolutionError(RieszError, ValueError):
    pass


class DimensionError(RieszError, ValueError):
    pass


class OutOfRangeError(RieszError, ValueError):
    pass


class InvalidOrderError(RieszError, ValueError):
    pass


class PartitionError(RieszError, ValueError):
    pass


class InvalidGridError(RieszError, ValueError):
    pass


class SampledFunctionError(RieszError, ValueError):
    """A stored sample document is malformed or its traces do not match."""


class NumericalDomainError(RieszError, ArithmeticError):
    """A substituted integral produced a non-finite value.

    The ``piece`` attribute names the sub-integral (for instance ``"I7-"``).
    """

    def __init__(self, piece: str, message: str = ""):
        self.piece = piece
        super().__init__(f"non-finite value in sub-integral {piece}" + (f": {message}" if message else ""))


class ConvergenceError(RieszError, RuntimeError):
    pass
