"""Shared exception types."""


class DimensionError(ValueError):
    """Operands have incompatible sizes."""


class RankError(ValueError):
    """A rank precondition (full rank, invertibility, independence) failed."""


class DomainError(ValueError):
    """Input is outside the operation's domain."""


class BudgetError(RuntimeError):
    """An enumeration or construction would exceed its configured budget."""


class DegenerateNormError(ValueError):
    """A claimed norm is only a seminorm (functionals do not span the dual)."""


class MetricError(ValueError):
    """A distance matrix violates the metric axioms."""


class InvalidHeightError(ValueError):
    """A height-indexed map operation was applied below height 1."""


class InfeasibleError(RuntimeError):
    """A linear program has no feasible point."""


class UnboundedError(RuntimeError):
    """A linear program is unbounded in the optimization direction."""
