"""Exception hierarchy shared by the engines, the dataset loader and the CLI."""


class FanoHKRError(Exception):
    pass


class ConsistencyError(FanoHKRError):
    """A computed result contradicts a closed-form Euler characteristic."""


class IncompleteFan(FanoHKRError):
    pass


class NonCartier(FanoHKRError):
    pass


class UnsupportedPlethysm(FanoHKRError):
    pass


class Infeasible(FanoHKRError):
    """No nonnegative integer assignment satisfies the registered constraints."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class UnknownEntries(FanoHKRError):
    pass


class AnchorMismatch(FanoHKRError):
    def __init__(self, label, expected, got):
        super().__init__(f"anchor {label}: expected {expected}, got {got}")
        self.label = label
        self.expected = expected
        self.got = got


class NoModel(FanoHKRError):
    pass


class ParseError(FanoHKRError):
    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class ValidationError(FanoHKRError):
    def __init__(self, family, check):
        super().__init__(f"{family}: {check}")
        self.family = family
        self.check = check
