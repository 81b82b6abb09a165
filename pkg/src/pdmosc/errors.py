"""Exception hierarchy shared by every module."""


class PDMError(Exception):
    """Base class for all package errors."""


class DomainError(PDMError, ValueError):
    """An argument lies outside the domain where the object is defined."""


class NonBijectiveError(DomainError):
    """A coordinate map would have a vanishing Jacobian on the requested domain."""


class ConvergenceError(PDMError, RuntimeError):
    """An iterative numerical procedure failed to reach its tolerance."""
