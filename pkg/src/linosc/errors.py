"""Exception hierarchy.  Every library error derives from :class:`LinoscError`."""


class LinoscError(Exception):
    pass


class DimensionMismatch(LinoscError, ValueError):
    pass


class NotOnVariety(LinoscError):
    pass


class SingularOrExcessCodim(LinoscError):
    pass


class NotOsculatingOrder1(LinoscError):
    pass


class NotOsculatingOrder2(LinoscError):
    pass


class NotAPencilOnHyperplane(LinoscError):
    pass


class PairingDegenerate(LinoscError):
    pass


class PreconditionFailed(LinoscError):
    pass


class ParseError(LinoscError, ValueError):
    """Syntax error in a polynomial expression, with 1-based line/column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class InvalidParameters(LinoscError, ValueError):
    pass
