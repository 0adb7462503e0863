import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from biped import RobotState
from envs import BipedEnv
from exceptions import TraceParseError

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["t", "fz_left", "fz_right", "fx_left", "fx_right", "com_x", "com_z", "reward"]
STATE_COLUMNS = ["t", *(f"q{index}" for index in range(9)), *(f"qd{index}" for index in range(9))]


class EpisodeTrace:
    """Per-control-step contact forces, CoM position and reward of one episode."""

    def __init__(self, frame: Optional[pd.DataFrame] = None):
        if frame is None:
            frame = pd.DataFrame({column: pd.Series(dtype="float64") for column in TRACE_COLUMNS})
        if list(frame.columns) != TRACE_COLUMNS:
            raise TraceParseError(f"columns must be {','.join(TRACE_COLUMNS)}", row=0)
        self.frame = frame.astype("float64").reset_index(drop=True)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]]) -> "EpisodeTrace":
        return cls(pd.DataFrame(list(rows), columns=TRACE_COLUMNS))

    def __len__(self) -> int:
        return len(self.frame)

    def __eq__(self, other) -> bool:
        return isinstance(other, EpisodeTrace) and self.frame.equals(other.frame)

    @property
    def fz_total(self) -> pd.Series:
        return self.frame["fz_left"] + self.frame["fz_right"]


@dataclass(frozen=True)
class TraceSummary:
    rows: int
    duration: float
    mean_fz_left: float
    max_fz_left: float
    mean_fz_right: float
    max_fz_right: float
    mean_fz_total: float
    max_fz_total: float
    total_reward: float

    def lines(self):
        return [
            f"rows: {self.rows}",
            f"duration: {self.duration:.6f} s",
            f"fz_left: mean {self.mean_fz_left:.6f} N, max {self.max_fz_left:.6f} N",
            f"fz_right: mean {self.mean_fz_right:.6f} N, max {self.max_fz_right:.6f} N",
            f"fz_total: mean {self.mean_fz_total:.6f} N, max {self.max_fz_total:.6f} N",
            f"total reward: {self.total_reward:.6f}",
        ]


def write_trace(trace: EpisodeTrace, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trace.frame.to_csv(path, index=False, float_format="%.17g")
    return path


def read_trace(path) -> EpisodeTrace:
    """
    Load a trace CSV.

    Rows are numbered from 1 after the header; row 0 stands for the header itself.

    :raises TraceParseError: on a wrong header, a non-numeric or missing value, or a
        non-increasing time stamp, naming the first offending row.
    """
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise TraceParseError("file is empty, expected a header", row=0)
    except pd.errors.ParserError as error:
        raise TraceParseError(f"malformed CSV: {error}", row=0)

    if list(raw.columns) != TRACE_COLUMNS:
        raise TraceParseError(f"header must be {','.join(TRACE_COLUMNS)}", row=0)

    values = np.zeros((len(raw), len(TRACE_COLUMNS)))
    previous_t = -math.inf
    for row, record in enumerate(raw.itertuples(index=False), start=1):
        for column, text in enumerate(record):
            try:
                value = float(text)
            except (TypeError, ValueError):
                raise TraceParseError(f"{TRACE_COLUMNS[column]} is not a number: {text!r}", row=row)
            if not math.isfinite(value):
                raise TraceParseError(f"{TRACE_COLUMNS[column]} is not finite", row=row)
            values[row - 1, column] = value
        if values[row - 1, 0] <= previous_t:
            raise TraceParseError("t must be strictly increasing", row=row)
        previous_t = values[row - 1, 0]

    return EpisodeTrace(pd.DataFrame(values, columns=TRACE_COLUMNS))


def summarize_trace(trace: EpisodeTrace) -> TraceSummary:
    frame = trace.frame
    if frame.empty:
        return TraceSummary(0, 0.0, *([math.nan] * 6), 0.0)
    total = trace.fz_total
    return TraceSummary(
        rows=len(frame),
        duration=float(frame["t"].iloc[-1]),
        mean_fz_left=float(frame["fz_left"].mean()),
        max_fz_left=float(frame["fz_left"].max()),
        mean_fz_right=float(frame["fz_right"].mean()),
        max_fz_right=float(frame["fz_right"].max()),
        mean_fz_total=float(total.mean()),
        max_fz_total=float(total.max()),
        total_reward=float(frame["reward"].sum()),
    )


def record_trace(
        policy: Callable[[np.ndarray], np.ndarray],
        env: BipedEnv,
        seed: Optional[int] = None,
        max_steps: Optional[int] = None,
        states: Optional[List[RobotState]] = None
) -> EpisodeTrace:
    """
    Run one episode without exploration and record a row per control step.

    :param policy: Maps an observation to an action.
    :param env: Biped environment.
    :param seed: Reset seed.
    :param max_steps: Optional cap below the episode budget.
    :param states: When given, the initial state and the state after every step are appended.
    :return: The recorded trace.
    """
    obs = env.reset(seed)
    if states is not None:
        states.append(env.state)
    rows = []
    done = False
    while not done and (max_steps is None or len(rows) < max_steps):
        obs, reward, done, info = env.step(policy(obs))
        if states is not None:
            states.append(env.state)
        rows.append((
            info["t"],
            info["fz_left"],
            info["fz_right"],
            info["fx_left"],
            info["fx_right"],
            info["com_x"],
            info["com_z"],
            reward,
        ))
    logger.info("recorded %d trace rows", len(rows))
    return EpisodeTrace.from_rows(rows)


def state_frame(states: Sequence[RobotState]) -> pd.DataFrame:
    """Rows ``t,q0..q8,qd0..qd8``, one per state."""
    rows = [np.concatenate([[state.t], state.q, state.qd]) for state in states]
    return pd.DataFrame(np.reshape(rows, (len(rows), len(STATE_COLUMNS))), columns=STATE_COLUMNS)


def write_state_trace(states: Sequence[RobotState], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    state_frame(states).to_csv(path, index=False, float_format="%.17g")
    return path
