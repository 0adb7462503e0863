class BasePersistenceError(Exception):
    """Base class for config, trace and checkpoint I/O errors."""

    def __init__(self, message=None):
        if message is None:
            message = "A persistence error occurred."
        super().__init__(message)


class ConfigParseError(BasePersistenceError):
    """Raised when a run configuration file cannot be parsed or validated."""

    def __init__(self, message="Malformed configuration.", line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}")


class TraceParseError(BasePersistenceError):
    """Raised when a trace CSV is malformed."""

    def __init__(self, message="Malformed trace.", row: int = 0):
        self.row = row
        super().__init__(f"row {row}: {message}")


class CheckpointError(BasePersistenceError):
    """Raised when a checkpoint file is missing or inconsistent."""

    def __init__(self, message="Invalid checkpoint."):
        super().__init__(message)
