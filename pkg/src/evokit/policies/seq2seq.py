"""LSTM encoder-decoder over digit-arithmetic token sequences.

Vocabulary: digits 0-9, 10 = '+', 11 = '='. The encoder consumes the
one-hot query; the decoder starts from the encoder's final cell state
with '=' as its first input and greedily feeds its own argmax back in.
The output head is restricted to the 10 digit classes, so predictions
are always digits.
"""

from __future__ import annotations

import numpy as np

from ..core import PolicyNetwork, PolicyState, TaskState
from .layout import ParamLayout
from .lstm import lstm_cell

__all__ = ["Seq2SeqPolicy", "seq2seq_layout", "VOCAB_SIZE", "TOK_PLUS", "TOK_EQ"]

VOCAB_SIZE = 12
TOK_PLUS = 10
TOK_EQ = 11


def seq2seq_layout(hidden_dim: int) -> ParamLayout:
    return ParamLayout.build(
        [
            ("enc_w", (4 * hidden_dim, VOCAB_SIZE + hidden_dim)),
            ("enc_b", (4 * hidden_dim,)),
            ("dec_w", (4 * hidden_dim, VOCAB_SIZE + hidden_dim)),
            ("dec_b", (4 * hidden_dim,)),
            ("head_w", (hidden_dim, 10)),
            ("head_b", (10,)),
        ]
    )


def _one_hot(tokens: np.ndarray) -> np.ndarray:
    out = np.zeros(tokens.shape + (VOCAB_SIZE,), dtype=np.float32)
    np.put_along_axis(out, tokens[..., None], np.float32(1.0), axis=-1)
    return out


class Seq2SeqPolicy(PolicyNetwork):
    """Greedy seq2seq predictor; emits ``answer_len`` digit tokens."""

    def __init__(self, answer_len: int, hidden_dim: int = 64):
        self.answer_len = int(answer_len)
        self.hidden_dim = int(hidden_dim)
        self.layout = seq2seq_layout(self.hidden_dim)
        self.num_params = self.layout.total

    def get_actions(self, t_state: TaskState, params, p_state: PolicyState):
        params = self.layout.check(params)
        obs = t_state.obs
        p = params.shape[0]
        if obs.shape[0] != p:
            raise ValueError(f"obs population axis {obs.shape[0]} != params rows {p}")
        lead = obs.shape[1:-1]
        q_len = obs.shape[-1]
        tokens = np.asarray(obs).astype(np.int64).reshape(p, -1, q_len)
        if tokens.min() < 0 or tokens.max() >= VOCAB_SIZE:
            raise ValueError(
                f"token ids out of vocabulary [0, {VOCAB_SIZE}): "
                f"min={tokens.min()}, max={tokens.max()}"
            )
        n = tokens.shape[1]
        blocks = self.layout.unflatten(params)

        h = np.zeros((p, n, self.hidden_dim), dtype=np.float32)
        c = np.zeros_like(h)
        for t in range(q_len):
            x = _one_hot(tokens[:, :, t])
            h, c = lstm_cell(x, h, c, blocks["enc_w"], blocks["enc_b"])

        predicted = np.empty((p, n, self.answer_len), dtype=np.int64)
        tok = np.full((p, n), TOK_EQ, dtype=np.int64)
        for t in range(self.answer_len):
            x = _one_hot(tok)
            h, c = lstm_cell(x, h, c, blocks["dec_w"], blocks["dec_b"])
            logits = np.matmul(h, blocks["head_w"]) + blocks["head_b"][:, None, :]
            tok = logits.argmax(axis=-1)
            predicted[:, :, t] = tok

        actions = predicted.astype(np.float32).reshape(p, *lead, self.answer_len)
        return actions, p_state
