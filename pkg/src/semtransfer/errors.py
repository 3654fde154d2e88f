"""Exception hierarchy shared by all semtransfer modules."""

from __future__ import annotations


class SemTransferError(Exception):
    """Base class for every error raised by this package."""


class RuleSyntaxError(SemTransferError):
    """Malformed rule, Vit or sorts text. Carries the source position."""

    def __init__(self, message: str, source: str = "<string>", line: int = 0, column: int = 0):
        self.message = message
        self.source = source
        self.line = line
        self.column = column
        super().__init__(f"{source}:{line}:{column}: {message}")


class RuleValidationError(SemTransferError):
    """Well-formed text that violates a rule-file invariant (arity clash, empty source set...)."""

    def __init__(self, message: str, source: str = "<string>", line: int = 0):
        self.message = message
        self.source = source
        self.line = line
        super().__init__(f"{source}:{line}: {message}")


class VitFormatError(SemTransferError):
    pass


class SortHierarchyError(SemTransferError):
    pass


class UnknownSortError(SortHierarchyError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class CompileError(SemTransferError):
    """Aggregates every orientation/expansion problem found while compiling."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))


class TransferError(SemTransferError):
    pass


class ExternalNotRegistered(TransferError):
    pass


class OracleLimitError(SemTransferError):
    pass
