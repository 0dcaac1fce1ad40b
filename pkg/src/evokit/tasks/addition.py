"""Seq2seq toy task: add two zero-padded d-digit integers.

A query is the token sequence "<a digits> + <b digits> =" and the answer
is the (d+1)-digit zero-padded sum. Training reward is mean per-token
accuracy (dense signal); in test mode the reward is the exact-sequence
match rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import StepResult, TaskState, VectorizedTask
from ..policies.seq2seq import TOK_EQ, TOK_PLUS
from ..rng import Key, fold_in, random_words

__all__ = ["make_addition_batch", "AdditionTask"]

_TAG_SAMPLE = 12


def _to_digits(values: np.ndarray, width: int) -> np.ndarray:
    digits = np.empty(values.shape + (width,), dtype=np.int64)
    rest = values.copy()
    for i in range(width - 1, -1, -1):
        digits[..., i] = rest % 10
        rest //= 10
    return digits


def make_addition_batch(key: Key, digits: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Sample n addition problems: (queries (n, 2d+2), answers (n, d+1))."""
    if digits < 1:
        raise ValueError(f"digits must be >= 1, got {digits}")
    limit = 10**digits
    words = random_words(fold_in(key, _TAG_SAMPLE), 2 * n)
    values = (words % np.uint64(limit)).astype(np.int64)
    a, b = values[:n], values[n:]
    queries = np.concatenate(
        [
            _to_digits(a, digits),
            np.full((n, 1), TOK_PLUS, dtype=np.int64),
            _to_digits(b, digits),
            np.full((n, 1), TOK_EQ, dtype=np.int64),
        ],
        axis=1,
    )
    answers = _to_digits(a + b, digits + 1)
    return queries, answers


@dataclass(frozen=True)
class AdditionRecord:
    answers: np.ndarray  # B x n x (d+1)
    done: bool


class AdditionTask(VectorizedTask):
    act_dim = 1
    max_steps = 1

    def __init__(self, digits: int = 2, batch_size: int = 128, test: bool = False):
        self.digits = int(digits)
        self.batch_size = int(batch_size)
        self.test = bool(test)
        self.query_len = 2 * self.digits + 2
        self.answer_len = self.digits + 1
        self.obs_dim = self.query_len

    def reset(self, keys: Sequence[Key], pop_size: int) -> TaskState:
        if len(keys) == 0:
            raise ValueError("reset requires at least one lane key")
        queries = []
        answers = []
        for key in keys:
            q, a = make_addition_batch(key, self.digits, self.batch_size)
            queries.append(q)
            answers.append(a)
        lane_q = np.stack(queries).astype(np.float32)  # B x n x L_q
        obs = np.broadcast_to(lane_q[None], (pop_size,) + lane_q.shape)
        return TaskState(obs=obs, extra=AdditionRecord(answers=np.stack(answers), done=False))

    def step(self, state: TaskState, actions: np.ndarray) -> StepResult:
        r: AdditionRecord = state.extra
        p, b = state.obs.shape[:2]
        expected = (p, b, self.batch_size, self.answer_len)
        actions = np.asarray(actions)
        if actions.shape != expected:
            raise ValueError(f"expected predictions of shape {expected}, got {actions.shape}")
        done = np.ones((p, b), dtype=bool)
        if r.done:
            return StepResult(state, np.zeros((p, b), dtype=np.float32), done)
        pred = actions.astype(np.int64)
        correct = pred == r.answers[None]
        if self.test:
            reward = correct.all(axis=-1).mean(axis=-1, dtype=np.float32)
        else:
            reward = correct.mean(axis=(-1, -2), dtype=np.float32)
        new_state = TaskState(obs=state.obs, extra=AdditionRecord(answers=r.answers, done=True))
        return StepResult(new_state, reward, done)
