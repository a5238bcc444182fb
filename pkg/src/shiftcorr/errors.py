"""Exception hierarchy.

Every error raised on purpose by the package derives from ``ShiftCorrError``;
the ``exit_code`` class attribute is what the CLI returns when the error
escapes a subcommand.
"""


class ShiftCorrError(Exception):
    exit_code = 1


class ConfigError(ShiftCorrError, ValueError):
    exit_code = 2


class DataError(ShiftCorrError):
    exit_code = 3


class BudgetError(ShiftCorrError):
    exit_code = 4


# newform coefficients
class UnsupportedSpec(ConfigError):
    pass


class FileParse(DataError, ValueError):
    pass


class Overflow(BudgetError):
    pass


class DeligneViolation(DataError, ValueError):
    pass


# Dirichlet coefficients / asymptotics
class OutOfRange(ShiftCorrError, ValueError):
    exit_code = 2


class PoleAt(ShiftCorrError, ZeroDivisionError):
    pass


# zero data
class NonMonotone(FileParse):
    pass


class NegativeOrdinate(FileParse):
    pass


class InsufficientCoverage(DataError):
    pass


class NetworkError(DataError):
    pass


class NotFound(DataError):
    pass


class CacheCorrupt(DataError):
    pass


# zero sums
class IntegerX(ShiftCorrError, ValueError):
    exit_code = 2


class PairBudgetExceeded(BudgetError):
    pass


class QuadratureNonConvergence(ShiftCorrError, ArithmeticError):
    pass


class EmptyZeroSet(DataError, ValueError):
    pass


# Sato-Tate
class BadInterval(ShiftCorrError, ValueError):
    exit_code = 2


class TooFewPrimes(DataError):
    pass


class MainTermZero(ShiftCorrError, ZeroDivisionError):
    pass
