"""Component contracts shared by algorithms, policies and tasks.

The toolkit is built around three components wired together by the
trainer:

* :class:`NEAlgorithm` — ask/tell solver over flat parameter vectors.
* :class:`PolicyNetwork` — batched network mapping observations plus a
  population parameter matrix to actions.
* :class:`VectorizedTask` — environment whose state carries explicit
  population (P) and repeat (B) axes.

All tensors are float32 numpy arrays whose leading dimensions are P x B
end to end. State records are immutable values: ``step`` and
``get_actions`` return new records instead of mutating, so population
evaluation can be partitioned across workers with results identical to a
sequential run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

import numpy as np

from .rng import Key

__all__ = [
    "ProtocolError",
    "FormatError",
    "TaskState",
    "PolicyState",
    "StepResult",
    "NEAlgorithm",
    "PolicyNetwork",
    "VectorizedTask",
    "batched_matmul",
]


class ProtocolError(RuntimeError):
    """Ask/tell called out of order, or with mismatched population size."""


class FormatError(ValueError):
    """A binary file (checkpoint, IDX dataset) failed validation."""


@dataclass(frozen=True)
class TaskState:
    """Immutable per-rollout environment record.

    ``obs`` always carries leading P x B dimensions (trailing dimensions
    are task specific); ``extra`` holds the task's own state record and is
    opaque to everything but the task.
    """

    obs: np.ndarray
    extra: Any = None


@dataclass(frozen=True)
class PolicyState:
    """Immutable per-rollout policy memory. Stateless policies use the base."""


class StepResult(NamedTuple):
    state: TaskState
    reward: np.ndarray  # P x B float32
    done: np.ndarray  # P x B bool


class NEAlgorithm:
    """Base class for neuroevolution algorithms (ask/tell interface).

    ``ask`` returns a P x D float32 matrix of candidate parameters; ``tell``
    reports their fitness (length P, higher is better). Strict alternation
    is enforced: asking twice, or telling without a pending ask, raises
    :class:`ProtocolError`. Fitness must be finite.
    """

    pop_size: int
    num_params: int

    def __init__(self, pop_size: int, num_params: int):
        self.pop_size = int(pop_size)
        self.num_params = int(num_params)
        self._ask_pending = False

    def ask(self) -> np.ndarray:
        if self._ask_pending:
            raise ProtocolError("ask called twice without an intervening tell")
        pop = self._ask()
        assert pop.shape == (self.pop_size, self.num_params)
        self._ask_pending = True
        return pop

    def tell(self, fitness) -> None:
        if not self._ask_pending:
            raise ProtocolError("tell called without a pending ask")
        fitness = np.asarray(fitness, dtype=np.float32).reshape(-1)
        if fitness.shape[0] != self.pop_size:
            raise ProtocolError(
                f"fitness length {fitness.shape[0]} does not match pop_size {self.pop_size}"
            )
        if not np.all(np.isfinite(fitness)):
            raise ValueError("fitness contains NaN or Inf")
        self._tell(fitness)
        self._ask_pending = False

    @property
    def best_params(self) -> np.ndarray:
        raise NotImplementedError

    def _ask(self) -> np.ndarray:
        raise NotImplementedError

    def _tell(self, fitness: np.ndarray) -> None:
        raise NotImplementedError


class PolicyNetwork:
    """Base class for batched policies.

    ``get_actions`` is a pure function: member i's actions depend only on
    row i of ``params``, its own observation lanes and its own slice of the
    policy state.
    """

    num_params: int

    def reset(self, t_state: TaskState) -> PolicyState:
        return PolicyState()

    def get_actions(
        self, t_state: TaskState, params: np.ndarray, p_state: PolicyState
    ) -> tuple[np.ndarray, PolicyState]:
        raise NotImplementedError


class VectorizedTask:
    """Base class for vectorized tasks.

    ``reset`` receives one key per rollout lane (B keys); every member of
    the population sees the same B initial lanes, so the returned ``obs``
    repeats the lane initialisations across the P axis. ``step`` is pure;
    once a lane is done its reward is zero and its state is frozen.
    """

    obs_dim: int
    act_dim: int
    max_steps: int
    # Multi-agent tasks couple all members in one arena and cannot be
    # partitioned along the P axis.
    multi_agent: bool = False

    def reset(self, keys: Sequence[Key], pop_size: int) -> TaskState:
        raise NotImplementedError

    def step(self, state: TaskState, actions: np.ndarray) -> StepResult:
        raise NotImplementedError


def batched_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Member-wise matrix product: (P, m, k) @ (P, k, n) -> (P, m, n).

    Each member's product is computed independently with a fixed
    accumulation order, so the result is bit-identical to a per-member
    loop regardless of how the population is chunked.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 3 or b.ndim != 3:
        raise ValueError(f"expected rank-3 tensors, got shapes {a.shape} and {b.shape}")
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"population axes differ: {a.shape[0]} vs {b.shape[0]}")
    if a.shape[2] != b.shape[1]:
        raise ValueError(f"inner dimensions differ: {a.shape} @ {b.shape}")
    return np.matmul(a, b)
