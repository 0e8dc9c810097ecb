"""Exception hierarchy shared by all modules."""


class StableCutError(Exception):
    """Base class for errors raised by this package."""


class InputError(StableCutError, ValueError):
    """Malformed or out-of-domain input."""


class ContractError(StableCutError):
    """A documented precondition on a structured argument was violated."""


class InfeasibleError(StableCutError):
    """The problem has no solution; ``certificate`` explains why."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class UnboundedFlowError(InfeasibleError):
    """An augmenting path of infinite capacity exists."""


class ResourceError(StableCutError):
    """A configured size bound was exceeded."""
