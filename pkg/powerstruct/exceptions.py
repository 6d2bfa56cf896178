"""Error hierarchy shared by every engine module."""


class PowerStructError(Exception):
    """Base class of all engine errors."""


class ContractError(PowerStructError, ValueError):
    """An operation was called outside its pre-conditions."""


class ShapeMismatchError(ContractError):
    """Operands disagree on variable count, bounds or wreath size."""


class NonUnitConstantError(ContractError):
    """A series whose constant term is not the ring one was given where 1 + (ideal) is required."""


class InvalidSeriesError(ContractError):
    """Malformed series data: no variables, exponents outside the box, or a zero substitution exponent."""


class MissingLocalDataError(ContractError):
    """A combinator needs local series data that was not supplied."""


class GuardExceededError(PowerStructError, RuntimeError):
    """A brute-force enumeration would exceed its configured size guard."""


class ParseError(PowerStructError, ValueError):
    """A class literal could not be parsed."""
