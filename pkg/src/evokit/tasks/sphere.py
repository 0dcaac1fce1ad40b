"""Synthetic quadratic task: fitness is -||theta - c||^2.

A known-optimum oracle used for solver sanity checks and trainer tests;
pairs with the identity policy so the genome is evaluated directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import StepResult, TaskState, VectorizedTask
from ..rng import Key

__all__ = ["SphereTask"]


@dataclass(frozen=True)
class SphereRecord:
    done: bool


class SphereTask(VectorizedTask):
    max_steps = 1

    def __init__(self, dim: int = 100, center: np.ndarray | float = 0.0):
        self.dim = int(dim)
        center = np.asarray(center, dtype=np.float32)
        if center.ndim == 0:
            center = np.full(self.dim, float(center), dtype=np.float32)
        if center.shape != (self.dim,):
            raise ValueError(f"center shape {center.shape} != ({self.dim},)")
        self.center = center
        self.obs_dim = 1
        self.act_dim = self.dim

    def reset(self, keys: Sequence[Key], pop_size: int) -> TaskState:
        if len(keys) == 0:
            raise ValueError("reset requires at least one lane key")
        obs = np.zeros((pop_size, len(keys), 1), dtype=np.float32)
        return TaskState(obs=obs, extra=SphereRecord(done=False))

    def step(self, state: TaskState, actions: np.ndarray) -> StepResult:
        r: SphereRecord = state.extra
        p, b = state.obs.shape[:2]
        actions = np.asarray(actions, dtype=np.float32)
        if actions.shape != (p, b, self.dim):
            raise ValueError(f"expected actions of shape {(p, b, self.dim)}, got {actions.shape}")
        done = np.ones((p, b), dtype=bool)
        if r.done:
            return StepResult(state, np.zeros((p, b), dtype=np.float32), done)
        diff = actions - self.center
        reward = -(diff * diff).sum(axis=-1)
        new_state = TaskState(obs=state.obs, extra=SphereRecord(done=True))
        return StepResult(new_state, reward.astype(np.float32), done)
