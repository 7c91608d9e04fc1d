"""Exception types shared across the package."""

from __future__ import annotations


class CausalAssemblyError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CausalAssemblyError):
    """Model source text is not in the rule grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class InvalidModelError(CausalAssemblyError):
    """A structurally parsed model violates a semantic invariant.

    Carries the full validation report so callers can surface every
    violation, not just the first.
    """

    def __init__(self, report):
        lines = "; ".join(v.message for v in report.violations)
        super().__init__(f"invalid model: {lines}")
        self.report = report


class CatalogError(CausalAssemblyError):
    """An object catalog file is malformed or inconsistent."""


class UnknownPartError(CausalAssemblyError):
    """A binding entry references a part id the object does not have."""

    def __init__(self, part_id: str, object_id: str):
        super().__init__(f"unknown part: {part_id!r} (object {object_id!r})")
        self.part_id = part_id
        self.object_id = object_id


class StateSpaceExceeded(CausalAssemblyError):
    """Reachable-state closure grew past the configured cap."""

    def __init__(self, max_states: int):
        super().__init__(f"state space exceeds the cap of {max_states} states")
        self.max_states = max_states


class NonConvergenceError(CausalAssemblyError):
    """Value iteration hit its iteration cap before the residual fell below epsilon."""

    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"value iteration did not converge after {iterations} sweeps "
            f"(residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


class ConditionMismatch(CausalAssemblyError):
    """An experiment's training or test objects violate the condition's category constraint."""


class UnknownSessionError(CausalAssemblyError):
    """Session id is not in the store."""


class StaleVersionError(CausalAssemblyError):
    """Optimistic-concurrency write with an out-of-date version counter."""

    def __init__(self, expected: int, actual: int):
        super().__init__(f"stale session version {expected} (current {actual})")
        self.expected = expected
        self.actual = actual
