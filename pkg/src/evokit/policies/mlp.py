"""Batched multi-layer perceptron policy."""

from __future__ import annotations

import numpy as np

from ..core import PolicyNetwork, PolicyState, TaskState
from .layout import ParamLayout

__all__ = ["MLPPolicy", "mlp_layout"]


def mlp_layout(layer_sizes: list[int]) -> ParamLayout:
    if len(layer_sizes) < 2 or any(s <= 0 for s in layer_sizes):
        raise ValueError(f"layer_sizes needs >= 2 positive entries, got {layer_sizes}")
    blocks = []
    for i, (n_in, n_out) in enumerate(zip(layer_sizes[:-1], layer_sizes[1:])):
        blocks.append((f"w{i}", (n_in, n_out)))
        blocks.append((f"b{i}", (n_out,)))
    return ParamLayout.build(blocks)


class MLPPolicy(PolicyNetwork):
    """Feed-forward stack with tanh hidden layers.

    ``output_activation`` is "tanh" (bounded control actions) or
    "identity" (raw outputs).
    """

    def __init__(self, layer_sizes: list[int], output_activation: str = "tanh"):
        if output_activation not in ("tanh", "identity"):
            raise ValueError(f"unknown output_activation {output_activation!r}")
        self.layer_sizes = [int(s) for s in layer_sizes]
        self.output_activation = output_activation
        self.layout = mlp_layout(self.layer_sizes)
        self.num_params = self.layout.total

    def get_actions(self, t_state: TaskState, params, p_state: PolicyState):
        params = self.layout.check(params)
        obs = t_state.obs
        p = params.shape[0]
        if obs.shape[0] != p:
            raise ValueError(f"obs population axis {obs.shape[0]} != params rows {p}")
        if obs.shape[-1] != self.layer_sizes[0]:
            raise ValueError(
                f"obs feature dim {obs.shape[-1]} != input size {self.layer_sizes[0]}"
            )
        lead = obs.shape[1:-1]
        x = np.ascontiguousarray(obs, dtype=np.float32).reshape(p, -1, self.layer_sizes[0])
        n_layers = len(self.layer_sizes) - 1
        for i in range(n_layers):
            w = self.layout.slice(params, f"w{i}")
            b = self.layout.slice(params, f"b{i}")
            x = np.matmul(x, w) + b[:, None, :]
            if i < n_layers - 1 or self.output_activation == "tanh":
                x = np.tanh(x)
        return x.reshape(p, *lead, self.layer_sizes[-1]), p_state
