"""Shared exception types."""


class DomainError(ValueError):
    """A point or spectrum lies outside the domain a function is defined on."""


class PreconditionError(ValueError):
    """A documented precondition of an operation is violated by the inputs."""


class SolverStall(RuntimeError):
    """An iterative solver hit its cap without reaching the requested accuracy."""
