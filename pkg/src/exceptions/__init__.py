from exceptions.simulation import (
    BaseSimulationError,
    ParameterError,
    IntegrationError,
    ReachabilityError,
    EnvUsageError
)
from exceptions.training import (
    BaseTrainingError,
    TrainingError,
    BufferNotReadyError
)
from exceptions.persistence import (
    BasePersistenceError,
    ConfigParseError,
    TraceParseError,
    CheckpointError
)
