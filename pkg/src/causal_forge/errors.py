"""Exception hierarchy shared across the package."""


class CausalForgeError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CausalForgeError):
    """A value violates a structural invariant (bad domain, bad edge, ...)."""


class DuplicateNameError(ValidationError):
    """Variable or operator names collide within one instance."""

    def __init__(self, kind: str, names: list[str]):
        self.kind = kind
        self.names = sorted(names)
        super().__init__(f"duplicate {kind} names: {', '.join(self.names)}")


class MalformedOperatorError(ValidationError):
    """An operator references unknown variables or out-of-domain values."""


class InvalidPlanError(CausalForgeError):
    """A plan names operators the instance does not have, or fails a plan precondition."""


class FormatError(CausalForgeError):
    """A text input (DIMACS, JSON, edge list) could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BadParameterError(CausalForgeError):
    """A generator was called with parameters outside its admissible range."""


class MissingEdgeError(CausalForgeError):
    """An edge operation referenced an edge that is not in the graph."""


class NotASubgraphError(CausalForgeError):
    """The target graph does not contain the instance's causal graph."""

    def __init__(self, message: str, missing_vertices=(), missing_edges=()):
        self.missing_vertices = tuple(sorted(missing_vertices))
        self.missing_edges = tuple(sorted(missing_edges))
        super().__init__(message)


class ShapeMismatchError(CausalForgeError):
    """Two path-shaped graphs have incompatible source/sink alternation."""

    def __init__(self, message: str, expected=None, actual=None):
        self.expected = expected
        self.actual = actual
        super().__init__(message)


class UnusedVariableError(CausalForgeError):
    """A formula declares variables that occur in no clause."""

    def __init__(self, indices: list[int]):
        self.indices = sorted(indices)
        super().__init__(
            "formula variables occur in no clause: "
            + ", ".join(str(i) for i in self.indices)
        )


class CapacityError(CausalForgeError):
    """The target graph cannot host the requested construction.

    ``proven`` is True when the capacity search ran to completion, i.e. the
    shortfall is a fact about the graph rather than about the search budget.
    """

    def __init__(self, message: str, report=None, proven: bool = True):
        self.report = report
        self.proven = proven
        super().__init__(message)


class BudgetExceededError(CausalForgeError):
    """A bounded search ran out of its state or expansion budget."""
