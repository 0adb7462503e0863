class BaseTrainingError(Exception):
    """Base class for all training-related errors."""

    def __init__(self, message=None):
        if message is None:
            message = "A training error occurred."
        super().__init__(message)


class TrainingError(BaseTrainingError):
    """Raised when a loss, gradient or parameter becomes non-finite."""

    def __init__(self, message="Training diverged."):
        super().__init__(message)


class BufferNotReadyError(BaseTrainingError):
    """Raised when a minibatch is requested from an underfull replay buffer."""

    def __init__(self, message="Replay buffer holds fewer transitions than requested."):
        super().__init__(message)
