"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class EmptyMainSetError(RuntimeError):
    """No sample exceeded the threshold; the main angle set is empty."""


class EmptyGridError(ValueError):
    """Codebook construction produced no usable entries."""


class SingularChannelError(RuntimeError):
    """The regularized channel Gram matrix is numerically singular."""
