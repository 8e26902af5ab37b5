"""Exception hierarchy shared by every module."""


class HeckeTraceError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 1


class ContextError(HeckeTraceError):
    """Operands live in different variable contexts."""

    exit_code = 2


class IncompleteAssignmentError(HeckeTraceError):
    exit_code = 2


class DomainError(HeckeTraceError):
    """Input violates a mathematical precondition."""

    exit_code = 2


class UsageError(HeckeTraceError):
    exit_code = 2


class SizeGuardError(HeckeTraceError):
    """A brute-force routine was asked to run beyond its size cap."""

    exit_code = 2


class UnsupportedCaseError(HeckeTraceError):
    """The vanishing argument does not cover this input; nothing is guessed."""

    exit_code = 3


class SpectrumError(HeckeTraceError):
    exit_code = 2
