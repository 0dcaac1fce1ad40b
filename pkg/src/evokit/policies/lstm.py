"""LSTM cell and a recurrent control policy built on it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import PolicyNetwork, PolicyState, TaskState
from .layout import ParamLayout

__all__ = ["lstm_cell", "LstmState", "LSTMPolicy", "lstm_layout"]


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return np.float32(0.5) * (np.tanh(np.float32(0.5) * x) + np.float32(1.0))


def lstm_cell(x, h, c, w, b):
    """One step of a batched LSTM cell.

    ``x`` is (P, N, input), ``h``/``c`` are (P, N, hidden); ``w`` is the
    per-member gate block (P, 4*hidden, input+hidden) and ``b`` (P, 4*hidden).
    Gate order is [i, f, g, o] with sigmoid on i/f/o and tanh on g:

        c' = f * c + i * g
        h' = o * tanh(c')
    """
    hidden = h.shape[-1]
    xh = np.concatenate([x, h], axis=-1)
    z = np.matmul(xh, np.swapaxes(w, -1, -2)) + b[:, None, :]
    i = _sigmoid(z[..., 0 * hidden : 1 * hidden])
    f = _sigmoid(z[..., 1 * hidden : 2 * hidden])
    g = np.tanh(z[..., 2 * hidden : 3 * hidden])
    o = _sigmoid(z[..., 3 * hidden : 4 * hidden])
    c_new = f * c + i * g
    h_new = o * np.tanh(c_new)
    return h_new, c_new


def lstm_layout(input_dim: int, hidden_dim: int, output_dim: int) -> ParamLayout:
    return ParamLayout.build(
        [
            ("w", (4 * hidden_dim, input_dim + hidden_dim)),
            ("b", (4 * hidden_dim,)),
            ("w_out", (hidden_dim, output_dim)),
            ("b_out", (output_dim,)),
        ]
    )


@dataclass(frozen=True)
class LstmState(PolicyState):
    h: np.ndarray
    c: np.ndarray


class LSTMPolicy(PolicyNetwork):
    """Recurrent policy: LSTM cell followed by a tanh output head.

    The cell state is threaded through :class:`LstmState`, initialised to
    zeros of shape (P, B, hidden) by ``reset``.
    """

    def __init__(self, input_dim: int, hidden_dim: int, output_dim: int):
        self.input_dim = int(input_dim)
        self.hidden_dim = int(hidden_dim)
        self.output_dim = int(output_dim)
        self.layout = lstm_layout(self.input_dim, self.hidden_dim, self.output_dim)
        self.num_params = self.layout.total

    def reset(self, t_state: TaskState) -> LstmState:
        p, b = t_state.obs.shape[:2]
        zeros = np.zeros((p, b, self.hidden_dim), dtype=np.float32)
        return LstmState(h=zeros, c=zeros.copy())

    def get_actions(self, t_state: TaskState, params, p_state: LstmState):
        params = self.layout.check(params)
        obs = np.asarray(t_state.obs, dtype=np.float32)
        p, b = obs.shape[:2]
        if params.shape[0] != p:
            raise ValueError(f"obs population axis {p} != params rows {params.shape[0]}")
        if obs.shape[-1] != self.input_dim:
            raise ValueError(f"obs feature dim {obs.shape[-1]} != input size {self.input_dim}")
        w = self.layout.slice(params, "w")
        bias = self.layout.slice(params, "b")
        h, c = lstm_cell(np.ascontiguousarray(obs), p_state.h, p_state.c, w, bias)
        w_out = self.layout.slice(params, "w_out")
        b_out = self.layout.slice(params, "b_out")
        actions = np.tanh(np.matmul(h, w_out) + b_out[:, None, :])
        return actions, LstmState(h=h, c=c)
