"""Training orchestration: seed scheduling, the ask/evaluate/tell loop,
periodic testing, CSV logging and checkpointing.

Rollout seeds derive from one master key: iteration ``i`` uses
``split(fold_in(master, i), B)`` and the fixed test keys come from
``fold_in(master, 0x7E57)``, so train and test lanes never share seeds
(for any iteration count below 0x7E57). All members of the population
share the same B lane keys each iteration (common random numbers).

Population evaluation is the only parallel region: members are
partitioned across a process pool and each worker rolls out its chunk
with the same lane keys, so results are bit-identical to a sequential
evaluation regardless of the worker count. BLAS pools are pinned to one
thread inside evaluation so that the worker pool is the only source of
parallelism.
"""

from __future__ import annotations

import multiprocessing
import os
import time
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .checkpoint import Checkpoint, save_checkpoint
from .core import NEAlgorithm, PolicyNetwork, VectorizedTask
from .rng import Key, fold_in, new_key, split

__all__ = [
    "TrainerConfig",
    "LogRecord",
    "keys_for_iteration",
    "fixed_test_keys",
    "run_rollout",
    "evaluate_population",
    "EvalPool",
    "run_training",
    "resolve_workers",
]

TEST_KEY_TAG = 0x7E57

CSV_HEADER = "iteration,best_score,mean_score,sigma_mean,elapsed_sec"


@dataclass
class TrainerConfig:
    seed: int = 0
    max_iters: int = 100
    pop_size: int = 64
    repeats: int = 1  # B rollout lanes per member
    test_interval: int = 10
    n_test_rollouts: int = 16
    log_path: str | None = None
    checkpoint_path: str | None = None
    workers: int | None = None  # None -> NE_WORKERS env or logical cores

    def validate(self) -> None:
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.test_interval < 1:
            raise ValueError(f"test_interval must be >= 1, got {self.test_interval}")
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")
        if self.n_test_rollouts < 1:
            raise ValueError(f"n_test_rollouts must be >= 1, got {self.n_test_rollouts}")


@dataclass(frozen=True)
class LogRecord:
    iteration: int
    best_score: float  # best raw member fitness this iteration
    mean_score: float
    sigma_mean: float
    elapsed_sec: float

    def csv_row(self) -> str:
        return (
            f"{self.iteration},{self.best_score!r},{self.mean_score!r},"
            f"{self.sigma_mean!r},{self.elapsed_sec:.3f}"
        )


def keys_for_iteration(master: Key, iteration: int, repeats: int) -> list[Key]:
    """The B lane keys for one training iteration, shared by all members."""
    return split(fold_in(master, iteration), repeats)


def fixed_test_keys(master: Key, n_test_rollouts: int) -> list[Key]:
    """Fixed test lane keys, domain-separated from every training iteration."""
    return split(fold_in(master, TEST_KEY_TAG), n_test_rollouts)


def _rollout_once(
    task: VectorizedTask, policy: PolicyNetwork, params: np.ndarray, keys: list[Key]
) -> np.ndarray:
    pop = params.shape[0]
    t_state = task.reset(keys, pop)
    p_state = policy.reset(t_state)
    total = np.zeros((pop, len(keys)), dtype=np.float32)
    for _ in range(task.max_steps):
        actions, p_state = policy.get_actions(t_state, params, p_state)
        t_state, reward, done = task.step(t_state, actions)
        total += reward
        if done.all():
            break
    return total.mean(axis=1)


def run_rollout(
    task: VectorizedTask, policy: PolicyNetwork, params: np.ndarray, keys: list[Key]
) -> np.ndarray:
    """Roll out each parameter row over the B lanes; returns mean cumulative
    reward per member (length P).

    A multi-agent task holds one whole-population arena per rollout, so its
    B lanes are realised as B sequential arenas whose per-agent scores are
    averaged.
    """
    params = np.asarray(params, dtype=np.float32)
    if task.multi_agent and len(keys) > 1:
        per_key = [_rollout_once(task, policy, params, [key]) for key in keys]
        return np.stack(per_key).mean(axis=0)
    return _rollout_once(task, policy, params, keys)


# Worker-process state, installed once per pool worker by _init_worker.
_WORKER: dict = {}


def _init_worker(task, policy):
    # Keep the controller alive so the 1-thread BLAS limit persists.
    _WORKER["blas_limit"] = threadpool_limits(limits=1)
    _WORKER["task"] = task
    _WORKER["policy"] = policy


def _eval_chunk(args):
    params_chunk, keys = args
    return run_rollout(_WORKER["task"], _WORKER["policy"], params_chunk, keys)


def resolve_workers(requested: int | None = None) -> int:
    """Worker count: NE_WORKERS env var wins, then the request, then cores."""
    env = os.environ.get("NE_WORKERS")
    if env is not None:
        n = int(env)
        if n < 1:
            raise ValueError(f"NE_WORKERS must be >= 1, got {n}")
        return n
    if requested is not None:
        if requested < 1:
            raise ValueError(f"workers must be >= 1, got {requested}")
        return requested
    return os.cpu_count() or 1


class EvalPool:
    """Process pool that partitions population evaluation along the P axis.

    Multi-agent tasks couple the members in one arena, so they are always
    evaluated in-process regardless of the requested worker count.
    """

    def __init__(self, task: VectorizedTask, policy: PolicyNetwork, n_workers: int | None = None):
        self.task = task
        self.policy = policy
        self.n_workers = resolve_workers(n_workers)
        self._pool = None
        if self.n_workers > 1 and not task.multi_agent:
            methods = multiprocessing.get_all_start_methods()
            ctx = multiprocessing.get_context("fork" if "fork" in methods else "spawn")
            self._pool = ctx.Pool(
                self.n_workers, initializer=_init_worker, initargs=(task, policy)
            )

    def evaluate(self, params: np.ndarray, keys: list[Key]) -> np.ndarray:
        params = np.asarray(params, dtype=np.float32)
        if self._pool is None or params.shape[0] < 2 * self.n_workers:
            with threadpool_limits(limits=1):
                return run_rollout(self.task, self.policy, params, keys)
        chunks = np.array_split(params, self.n_workers, axis=0)
        args = [(chunk, keys) for chunk in chunks if chunk.shape[0] > 0]
        results = self._pool.map(_eval_chunk, args)
        return np.concatenate(results)

    def close(self) -> None:
        if self._pool is not None:
            self._pool.close()
            self._pool.join()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def evaluate_population(
    params: np.ndarray,
    task: VectorizedTask,
    policy: PolicyNetwork,
    keys: list[Key],
    pool: EvalPool | None = None,
) -> np.ndarray:
    """Fitness of each parameter row: mean cumulative reward over B lanes."""
    if pool is not None:
        return pool.evaluate(params, keys)
    with threadpool_limits(limits=1):
        return run_rollout(task, policy, np.asarray(params, dtype=np.float32), keys)


def _evaluate_center(
    best: np.ndarray,
    task: VectorizedTask,
    policy: PolicyNetwork,
    test_keys: list[Key],
    pop_size: int,
) -> float:
    """Test score of the solver's center on the fixed test keys."""
    with threadpool_limits(limits=1):
        if task.multi_agent:
            params = np.tile(best[None, :], (pop_size, 1))
            fitness = run_rollout(task, policy, params, test_keys)
            return float(fitness.mean())
        fitness = run_rollout(task, policy, best[None, :], test_keys)
        return float(fitness[0])


def _check_writable(path: str) -> None:
    existed = os.path.exists(path)
    try:
        with open(path, "ab"):
            pass
    finally:
        if not existed and os.path.exists(path):
            os.remove(path)


def run_training(
    cfg: TrainerConfig,
    algo: NEAlgorithm,
    policy: PolicyNetwork,
    task: VectorizedTask,
    test_task: VectorizedTask | None = None,
    header_lines: list[str] | None = None,
    on_record=None,
) -> float:
    """Run the ask -> evaluate -> tell loop; returns the final test score.

    Writes one CSV record per iteration to ``cfg.log_path`` (flushed per
    record) and saves a checkpoint to ``cfg.checkpoint_path`` whenever the
    periodic test score improves.
    """
    cfg.validate()
    test_task = test_task if test_task is not None else task
    if cfg.log_path:
        _check_writable(cfg.log_path)
    if cfg.checkpoint_path:
        _check_writable(cfg.checkpoint_path)

    master = new_key(cfg.seed)
    test_keys = fixed_test_keys(master, cfg.n_test_rollouts)
    algo_name = getattr(algo, "name", type(algo).__name__.lower())

    log_file = open(cfg.log_path, "w", encoding="utf-8") if cfg.log_path else None
    try:
        if log_file:
            for line in header_lines or []:
                log_file.write(f"# {line}\n")
            log_file.write(CSV_HEADER + "\n")
            log_file.flush()

        best_test_score = -np.inf
        final_test_score = -np.inf
        start = time.monotonic()
        with EvalPool(task, policy, cfg.workers) as pool:
            for iteration in range(1, cfg.max_iters + 1):
                keys = keys_for_iteration(master, iteration, cfg.repeats)
                pop = algo.ask()
                fitness = evaluate_population(pop, task, policy, keys, pool)
                algo.tell(fitness)

                record = LogRecord(
                    iteration=iteration,
                    best_score=float(fitness.max()),
                    mean_score=float(fitness.mean()),
                    sigma_mean=float(getattr(algo, "sigma_mean", 0.0)),
                    elapsed_sec=time.monotonic() - start,
                )
                if log_file:
                    log_file.write(record.csv_row() + "\n")
                    log_file.flush()
                if on_record:
                    on_record(record)

                run_test = iteration % cfg.test_interval == 0 or iteration == cfg.max_iters
                if run_test:
                    score = _evaluate_center(
                        algo.best_params, test_task, policy, test_keys, cfg.pop_size
                    )
                    final_test_score = score
                    if score > best_test_score:
                        best_test_score = score
                        if cfg.checkpoint_path:
                            save_checkpoint(
                                cfg.checkpoint_path,
                                Checkpoint(
                                    params=algo.best_params,
                                    algo=algo_name,
                                    iteration=iteration,
                                    score=score,
                                ),
                            )
        return final_test_score
    finally:
        if log_file:
            log_file.close()
