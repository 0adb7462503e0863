from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from exceptions import ParameterError
from nn.mlp import Gradients, Mlp


@dataclass
class AdamState:
    """First and second moment accumulators, one pair per parameter array."""

    first_moment: List[np.ndarray]
    second_moment: List[np.ndarray]
    step_count: int = 0
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def adam_new(mlp: Mlp, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> AdamState:
    if lr <= 0 or eps <= 0 or not (0 <= beta1 < 1 and 0 <= beta2 < 1):
        raise ParameterError("Adam needs lr > 0, eps > 0 and betas in [0, 1).")
    return AdamState(
        first_moment=[np.zeros_like(array) for array in mlp.parameters()],
        second_moment=[np.zeros_like(array) for array in mlp.parameters()],
        lr=lr,
        beta1=beta1,
        beta2=beta2,
        eps=eps,
    )


def adam_step(opt: AdamState, mlp: Mlp, grads: Gradients) -> Tuple[Mlp, AdamState]:
    """
    One bias-corrected Adam descent step, applied to ``mlp`` in place.

    A zero gradient on a fresh state leaves every parameter exactly unchanged.
    """
    params, partials = mlp.parameters(), grads.parameters()
    if len(params) != len(partials) or len(params) != len(opt.first_moment):
        raise ParameterError("Gradient and optimizer layouts do not match the network.")
    for param, grad, moment in zip(params, partials, opt.first_moment):
        if param.shape != grad.shape or param.shape != moment.shape:
            raise ParameterError(f"Shape mismatch: parameter {param.shape}, gradient {grad.shape}.")

    opt.step_count += 1
    correction1 = 1.0 - opt.beta1 ** opt.step_count
    correction2 = 1.0 - opt.beta2 ** opt.step_count
    for param, grad, m, v in zip(params, partials, opt.first_moment, opt.second_moment):
        m[...] = opt.beta1 * m + (1.0 - opt.beta1) * grad
        v[...] = opt.beta2 * v + (1.0 - opt.beta2) * grad * grad
        param -= opt.lr * (m / correction1) / (np.sqrt(v / correction2) + opt.eps)
    return mlp, opt
