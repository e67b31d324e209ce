"""Exception hierarchy shared by every lspace module."""


class LSpaceError(Exception):
    """Base class for domain failures (CLI exit code 1)."""


class GrammarSyntaxError(LSpaceError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateRule(GrammarSyntaxError):
    pass


class MissingAxiom(GrammarSyntaxError):
    pass


class ForeignSymbol(LSpaceError):
    pass


class LengthCapExceeded(LSpaceError):
    pass


class PartialInvolution(LSpaceError):
    pass


class NotBinaryMinimal(LSpaceError):
    pass


class NotBinary(LSpaceError):
    pass


class TooShort(LSpaceError):
    pass


class IndexOutOfRange(LSpaceError):
    pass


class NotAStump(LSpaceError):
    pass


class InvalidSpan(LSpaceError):
    pass


class NotConstituent(LSpaceError):
    pass


class NotPresent(LSpaceError):
    pass


class EmptySister(LSpaceError):
    pass


class InvalidSelector(LSpaceError):
    pass


class NotApplicable(LSpaceError):
    pass
