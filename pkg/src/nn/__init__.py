from nn.mlp import (
    Activation,
    Gradients,
    Mlp,
    backward,
    copy_mlp,
    flat_parameters,
    forward,
    mlp_new,
    parameter_count,
    same_architecture,
    soft_update
)
from nn.optim import AdamState, adam_new, adam_step
from nn.checkpoint import activation_for_role, dumps_mlp, load_mlp, loads_mlp, save_mlp
