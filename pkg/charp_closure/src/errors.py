class CharpError(Exception):
    """Base class for every error raised by charp_closure"""


class ZeroInverse(CharpError, ZeroDivisionError):
    pass


class DivisionByZero(CharpError, ZeroDivisionError):
    pass


class NotPrime(CharpError, ValueError):
    pass


class LengthMismatch(CharpError, ValueError):
    pass


class RingMismatch(CharpError, ValueError):
    pass


class ResourceLimit(CharpError):
    """Raised when a computation outgrows the configured basis size or degree budget"""


class EmptyRing(CharpError):
    """The unit ideal has no dimension (the quotient is the zero ring)"""


class NotMonomial(CharpError, ValueError):
    pass


class UnitRelation(CharpError, ValueError):
    pass


class NonPerfectCoefficients(CharpError):
    """Full Frobenius preimages need a prime coefficient field"""


class TooManyElements(CharpError, ValueError):
    pass


class EmptyJacobian(CharpError):
    pass


class NotHomogeneous(CharpError, ValueError):
    pass


class ConfigError(CharpError, ValueError):
    pass


class SessionError(CharpError):
    """DSL error with a source position"""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class SessionSyntaxError(SessionError):
    pass


class SessionNameError(SessionError):
    pass


class SessionTypeError(SessionError):
    pass
