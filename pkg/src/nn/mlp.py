"""Feedforward networks on numpy arrays.

Weights are stored as (fan_in, fan_out) matrices so a batch of inputs, one sample per row,
passes through a layer as ``x @ W + b``. Hidden layers use relu; the output layer is either
the identity or tanh.
"""
import enum
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from exceptions import ParameterError
from utils.seeding import make_rng


class Activation(str, enum.Enum):
    IDENTITY = "identity"
    TANH = "tanh"


@dataclass
class Mlp:
    layer_sizes: Tuple[int, ...]
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    output_activation: Activation = Activation.IDENTITY

    @property
    def input_size(self) -> int:
        return self.layer_sizes[0]

    @property
    def output_size(self) -> int:
        return self.layer_sizes[-1]

    def parameters(self) -> List[np.ndarray]:
        """Weights and biases interleaved layer by layer; the arrays are live views."""
        return [array for pair in zip(self.weights, self.biases) for array in pair]


@dataclass
class Gradients:
    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def parameters(self) -> List[np.ndarray]:
        return [array for pair in zip(self.weights, self.biases) for array in pair]

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(array)) for array in self.parameters())


def _check_sizes(layer_sizes: Sequence[int]) -> Tuple[int, ...]:
    sizes = tuple(int(size) for size in layer_sizes)
    if len(sizes) < 2 or any(size <= 0 for size in sizes):
        raise ParameterError(f"An MLP needs at least two positive layer sizes, got {list(layer_sizes)}.")
    return sizes


def mlp_new(
        layer_sizes: Sequence[int],
        output_activation: Union[Activation, str] = Activation.IDENTITY,
        seed: Union[int, np.random.Generator] = 0
) -> Mlp:
    """
    Create a network with weights drawn uniformly from +-1/sqrt(fan_in) and zero biases.

    :param layer_sizes: Input, hidden and output widths.
    :param output_activation: ``identity`` or ``tanh``.
    :param seed: Integer seed or an existing generator to draw from.
    :return: A new Mlp.
    """
    sizes = _check_sizes(layer_sizes)
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = 1.0 / math.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return Mlp(sizes, weights, biases, Activation(output_activation))


def parameter_count(mlp: Mlp) -> int:
    return sum(array.size for array in mlp.parameters())


def flat_parameters(mlp: Mlp) -> np.ndarray:
    return np.concatenate([array.ravel() for array in mlp.parameters()])


def copy_mlp(mlp: Mlp) -> Mlp:
    return Mlp(
        mlp.layer_sizes,
        [w.copy() for w in mlp.weights],
        [b.copy() for b in mlp.biases],
        mlp.output_activation,
    )


def _as_batch(mlp: Mlp, x) -> Tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    batch = x[None, :] if single else x
    if batch.ndim != 2 or batch.shape[1] != mlp.input_size:
        raise ParameterError(f"Expected inputs of size {mlp.input_size}, got shape {x.shape}.")
    return batch, single


def _forward_pass(mlp: Mlp, batch: np.ndarray) -> Tuple[List[np.ndarray], np.ndarray]:
    activations = [batch]
    h = batch
    last = len(mlp.weights) - 1
    for index, (w, b) in enumerate(zip(mlp.weights, mlp.biases)):
        z = h @ w + b
        if index < last:
            h = np.maximum(z, 0.0)
        elif mlp.output_activation == Activation.TANH:
            h = np.tanh(z)
        else:
            h = z
        activations.append(h)
    return activations, h


def forward(mlp: Mlp, x) -> np.ndarray:
    """Evaluate the network on one input vector or on a batch of row vectors."""
    batch, single = _as_batch(mlp, x)
    _, output = _forward_pass(mlp, batch)
    return output[0] if single else output


def backward(mlp: Mlp, x, upstream_grad) -> Tuple[Gradients, np.ndarray]:
    """
    Reverse-mode partials of ``sum(upstream_grad * forward(x))``.

    The forward pass is recomputed from ``x``. For a batch, parameter gradients are summed
    over rows and the input gradient keeps one row per sample.

    :param mlp: Network.
    :param x: Input vector or batch.
    :param upstream_grad: Gradient with respect to the output, same shape as the output.
    :return: (parameter gradients, input gradient).
    """
    batch, single = _as_batch(mlp, x)
    upstream = np.asarray(upstream_grad, dtype=float)
    upstream = upstream[None, :] if upstream.ndim == 1 else upstream
    if upstream.shape != (batch.shape[0], mlp.output_size):
        raise ParameterError(
            f"Upstream gradient shape {upstream.shape} does not match output {(batch.shape[0], mlp.output_size)}."
        )

    activations, output = _forward_pass(mlp, batch)
    if mlp.output_activation == Activation.TANH:
        delta = upstream * (1.0 - output ** 2)
    else:
        delta = upstream

    grad_w = [np.zeros_like(w) for w in mlp.weights]
    grad_b = [np.zeros_like(b) for b in mlp.biases]
    for index in range(len(mlp.weights) - 1, -1, -1):
        grad_w[index] = activations[index].T @ delta
        grad_b[index] = delta.sum(axis=0)
        delta = delta @ mlp.weights[index].T
        if index > 0:
            delta = delta * (activations[index] > 0.0)

    input_grad = delta[0] if single else delta
    return Gradients(grad_w, grad_b), input_grad


def same_architecture(first: Mlp, second: Mlp) -> bool:
    return first.layer_sizes == second.layer_sizes and first.output_activation == second.output_activation


def soft_update(target: Mlp, source: Mlp, tau: float) -> Mlp:
    """Blend ``target`` toward ``source`` in place: target <- tau * source + (1 - tau) * target."""
    if not same_architecture(target, source):
        raise ParameterError(f"Cannot blend {target.layer_sizes} into {source.layer_sizes}.")
    if not 0.0 <= tau <= 1.0:
        raise ParameterError(f"tau must lie in [0, 1], got {tau}.")
    for mine, theirs in zip(target.parameters(), source.parameters()):
        if tau == 1.0:
            mine[...] = theirs
        else:
            mine[...] = tau * theirs + (1.0 - tau) * mine
    return target
