class BaseSimulationError(Exception):
    """Base class for all simulation-related errors."""

    def __init__(self, message=None):
        if message is None:
            message = "A simulation error occurred."
        super().__init__(message)


class ParameterError(BaseSimulationError, ValueError):
    """Raised when a physical or numerical parameter is out of its valid range."""

    def __init__(self, message="Invalid parameter."):
        super().__init__(message)


class IntegrationError(BaseSimulationError):
    """Raised when the dynamics integration meets or produces a non-finite state."""

    def __init__(self, message="Non-finite state during integration."):
        super().__init__(message)


class ReachabilityError(BaseSimulationError):
    """Raised when an inverse kinematics target lies outside the leg workspace."""

    def __init__(self, message="Target is out of reach."):
        super().__init__(message)


class EnvUsageError(BaseSimulationError):
    """Raised when an environment is driven out of protocol, e.g. stepped after done."""

    def __init__(self, message="Environment used out of protocol."):
        super().__init__(message)
