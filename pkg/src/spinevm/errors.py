"""Exception hierarchy shared by every module."""


class SpineError(Exception):
    """Base class for evaluator errors."""


class ParseError(SyntaxError):
    """Malformed surface syntax.  Carries ``lineno`` and ``offset`` (column)."""

    def __init__(self, msg, line=0, col=0):
        super().__init__(msg)
        self.msg = msg
        self.lineno = line
        self.offset = col

    def __str__(self):
        return f"{self.msg} (line {self.lineno}, column {self.offset})"


class UnboundName(ParseError):
    def __init__(self, name, line=0, col=0):
        super().__init__(f"unbound name {name!r}", line, col)
        self.name = name


class UnboundIndex(SpineError):
    pass


class DanglingEnd(SpineError):
    """An end reference is not reachable from the context it should close."""


class InternalRefcount(SpineError):
    pass


class DtorNonCtor(SpineError):
    pass


class PrimFailure(SpineError):
    pass


class PrimTypeError(PrimFailure):
    pass


class NonTermination(SpineError):
    pass


class UnificationRequired(SpineError):
    pass


class TypeofError(SpineError):
    pass


class BudgetExceeded(SpineError):
    pass


class InvariantViolation(SpineError):
    def __init__(self, violation):
        super().__init__(str(violation))
        self.violation = violation
