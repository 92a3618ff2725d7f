"""Exception hierarchy.

Every error derives from :class:`ChanrankError` (and ``ValueError``) so the
CLI can map all core failures to exit status 1 with one ``except``.
"""


class ChanrankError(ValueError):
    """Base class for all errors raised by this package."""


class DomainError(ChanrankError):
    """An input value lies outside the domain of the operation."""


class ParameterError(ChanrankError):
    """Invalid model or simulation parameters."""


class EmptyInputError(ChanrankError):
    """An operation received an empty collection it cannot work on."""


class ConsistencyError(ChanrankError):
    """Inputs are individually valid but inconsistent with each other."""


class ParseError(ChanrankError):
    """Malformed wire input. Carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
