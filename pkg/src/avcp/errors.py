class AVCPError(Exception):
    """Base class for library errors."""


class DimensionMismatch(AVCPError, ValueError):
    pass


class NotHermitian(AVCPError, ValueError):
    pass


class NumericalFailure(AVCPError, ArithmeticError):
    pass


class DomainError(AVCPError, ValueError):
    pass


class NotReal(AVCPError, ValueError):
    pass


class ParseError(AVCPError, ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at offset {position}")


class UnknownSymbol(AVCPError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown symbol"


class NotSimple(AVCPError, ValueError):
    def __init__(self, message: str, offenders=()):
        self.offenders = list(offenders)
        super().__init__(message)


class FlagMissing(AVCPError, ValueError):
    pass


class NonScalarCommutator(AVCPError, ValueError):
    pass


class UnknownLabel(AVCPError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown label"


class AVCPViolation(AVCPError, ValueError):
    """A copy assignment puts noncommuting measurements on one copy."""


class IllConditioned(AVCPError, ArithmeticError):
    pass


class InvalidWidth(AVCPError, ValueError):
    pass


class ConfigError(AVCPError, ValueError):
    pass
