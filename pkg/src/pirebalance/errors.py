"""Exception types raised by the solver."""


class RebalanceError(Exception):
    """Base class for every error raised by this package."""


class DuplicateVertexError(RebalanceError):
    pass


class UnknownEndpointError(RebalanceError):
    pass


class NegativeLengthError(RebalanceError):
    pass


class DisconnectedGraphError(RebalanceError):
    pass


class AsymmetricInputError(RebalanceError):
    pass


class NegativeEntryError(RebalanceError):
    pass


class UnknownVertexError(RebalanceError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class InvalidInstanceError(RebalanceError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid instance: " + "; ".join(self.violations))


class BadParametersError(RebalanceError, ValueError):
    pass


class ParseError(RebalanceError):
    """Malformed instance, plan or matrix file.

    ``where`` names the offending line or field so the message can point at it.
    """

    def __init__(self, message: str, where: str | None = None, path=None):
        self.message = message
        self.where = where
        self.path = path
        prefix = f"{path}: " if path is not None else ""
        suffix = f" (at {where})" if where else ""
        super().__init__(f"{prefix}{message}{suffix}")


class UnbalancedClassificationError(RebalanceError):
    pass


class EmptyMemberSetError(RebalanceError, ValueError):
    pass


class InconsistentFlowError(RebalanceError):
    pass


class ResourceLimitError(RebalanceError):
    def __init__(self, max_states: int):
        self.max_states = max_states
        super().__init__(f"search exceeded {max_states} states")


class InvalidGrainError(RebalanceError, ValueError):
    pass
