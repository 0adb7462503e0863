from pathlib import Path
from typing import List, Tuple

import numpy as np

from exceptions import CheckpointError
from nn.mlp import Activation, Mlp

MAGIC = "TWK1"


def activation_for_role(role: str) -> Activation:
    return Activation.TANH if "actor" in role else Activation.IDENTITY


def dumps_mlp(mlp: Mlp, role: str) -> str:
    """Header ``TWK1 <role> <sizes>``, then each layer's weights row-major and its biases, one value per line."""
    if not role or any(char.isspace() for char in role):
        raise CheckpointError(f"Role must be a non-empty word, got {role!r}.")
    lines = [f"{MAGIC} {role} {'-'.join(str(size) for size in mlp.layer_sizes)}"]
    for array in mlp.parameters():
        lines.extend(repr(float(value)) for value in array.ravel())
    return "\n".join(lines) + "\n"


def loads_mlp(text: str) -> Tuple[Mlp, str]:
    lines = text.splitlines()
    if not lines:
        raise CheckpointError("Empty network file.")
    header = lines[0].split()
    if len(header) != 3 or header[0] != MAGIC:
        raise CheckpointError(f"Bad network header: {lines[0]!r}.")
    _, role, sizes_text = header
    try:
        sizes = tuple(int(size) for size in sizes_text.split("-"))
        values = np.array([float(line) for line in lines[1:] if line.strip()])
    except ValueError as error:
        raise CheckpointError(f"Malformed network file: {error}")
    if len(sizes) < 2 or any(size <= 0 for size in sizes):
        raise CheckpointError(f"Bad layer sizes {sizes_text!r}.")

    expected = sum(fan_in * fan_out + fan_out for fan_in, fan_out in zip(sizes[:-1], sizes[1:]))
    if values.size != expected:
        raise CheckpointError(f"Expected {expected} parameters for {sizes_text}, found {values.size}.")
    if not np.all(np.isfinite(values)):
        raise CheckpointError("Network file holds non-finite parameters.")

    weights: List[np.ndarray] = []
    biases: List[np.ndarray] = []
    cursor = 0
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        weights.append(values[cursor:cursor + fan_in * fan_out].reshape(fan_in, fan_out).copy())
        cursor += fan_in * fan_out
        biases.append(values[cursor:cursor + fan_out].copy())
        cursor += fan_out
    return Mlp(sizes, weights, biases, activation_for_role(role)), role


def save_mlp(mlp: Mlp, role: str, path) -> Path:
    path = Path(path)
    path.write_text(dumps_mlp(mlp, role), encoding="utf-8")
    return path


def load_mlp(path) -> Tuple[Mlp, str]:
    path = Path(path)
    if not path.is_file():
        raise CheckpointError(f"Network file not found: {path}")
    return loads_mlp(path.read_text(encoding="utf-8"))
