"""Exception hierarchy shared by every module.

The CLI maps each family onto a fixed exit code, so library callers and
shell scripts see the same classification.
"""


class TrapkitError(Exception):
    exit_code = 1


class ValidationError(TrapkitError, ValueError):
    """A structure violates its invariants (bad graph, bad input text)."""

    exit_code = 2

    def __init__(self, message, violations=(), line=None):
        self.violations = tuple(violations)
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ArityError(TrapkitError, ValueError):
    """Sizes, arities or indices do not match what an operation needs."""

    exit_code = 4


class PartialityError(TrapkitError):
    """A partial trace is undefined in the target."""

    exit_code = 3


class PartialTraceUndefined(PartialityError):
    """Raised by a quasi-target when t_{i,j} has no value on an element."""


class IrreduciblyPartial(PartialityError):
    """The completion cannot express an undefined trace as a loop."""


class DecompositionError(TrapkitError, ValueError):
    exit_code = 2


class BindingError(TrapkitError, KeyError):
    """A decoration has no bound value, or the value has the wrong arity."""

    exit_code = 2

    def __str__(self):
        return str(self.args[0]) if self.args else ""
