import math
from typing import Tuple


def validate_range(low: float, high: float, name: str) -> Tuple[float, float]:
    if not (math.isfinite(low) and math.isfinite(high)):
        raise ValueError(f"{name} limits must be finite.")
    if low >= high:
        raise ValueError(f"{name} lower limit must be below its upper limit.")
    return low, high


def parse_layer_sizes(value) -> Tuple[int, ...]:
    """Accept ``64-64`` style strings as well as sequences of counts."""
    if isinstance(value, str):
        parts = [part for part in value.strip().split("-") if part]
        try:
            value = [int(part) for part in parts]
        except ValueError:
            raise ValueError(f"Layer sizes must be dash-joined integers, got {value!r}.")
    sizes = tuple(int(size) for size in value)
    if any(size <= 0 for size in sizes):
        raise ValueError("Layer sizes must be positive.")
    return sizes


def format_layer_sizes(sizes) -> str:
    return "-".join(str(size) for size in sizes)
