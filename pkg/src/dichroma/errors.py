"""Exception types shared across the package."""


class DigraphError(ValueError):
    """Raised when a digraph cannot be constructed from the given data."""


class LoopError(DigraphError):
    def __init__(self, vertex):
        super().__init__(f"loop at vertex {vertex}")
        self.vertex = vertex


class VertexRangeError(DigraphError):
    def __init__(self, vertex, n):
        super().__init__(f"vertex {vertex} out of range for n={n}")
        self.vertex = vertex
        self.n = n


class ContractError(ValueError):
    """A documented precondition of an operation was violated by the caller.

    ``witness`` carries whatever evidence was found (a cycle, a forbidden
    subdigraph, the offending vertex), or ``None``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalError(RuntimeError):
    """An internal invariant failed with no forbidden structure to blame.

    ``context`` is a plain dict meant to be dumped for diagnosis.
    """

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = dict(context or {})


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, budget):
        super().__init__(f"search budget of {budget} nodes exceeded")
        self.budget = budget


class ColourBoundExceeded(RuntimeError):
    def __init__(self, k_max, nodes_explored=0):
        super().__init__(f"dichromatic number exceeds k_max={k_max}")
        self.k_max = k_max
        self.nodes_explored = nodes_explored


class GenerationError(RuntimeError):
    pass


class ParseError(ValueError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
