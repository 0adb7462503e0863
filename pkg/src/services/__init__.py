from services.plate import PlateIndentationResult, analytic_plate_sinkage, plate_indentation
from services.traces import (
    STATE_COLUMNS,
    TRACE_COLUMNS,
    EpisodeTrace,
    TraceSummary,
    read_trace,
    record_trace,
    state_frame,
    summarize_trace,
    write_state_trace,
    write_trace
)
from services.evaluation import (
    POLICY_NAMES,
    EvaluationResult,
    actor_policy,
    evaluate,
    make_policy,
    reference_policy,
    zero_policy
)
