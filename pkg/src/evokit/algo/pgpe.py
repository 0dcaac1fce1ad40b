"""PGPE with symmetric sampling, rank shaping and ClipUp/Adam/SGD updates.

The solver maintains a separable Gaussian search distribution
(center ``mu``, per-dimension ``sigma``). Each ``ask`` draws P/2
perturbations and returns the mirrored population ``mu +/- eps``; ``tell``
estimates gradients for ``mu`` and ``sigma`` from the paired fitnesses and
follows them, with the sigma update clamped to a maximum relative change
per iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import NEAlgorithm
from ..rng import fold_in, new_key, normal
from .optimizers import Adam, ClipUp, Sgd

__all__ = ["PgpeConfig", "PGPE", "RandomSearch", "centered_ranks", "pgpe_gradients"]


@dataclass
class PgpeConfig:
    pop_size: int = 64
    sigma_init: float = 0.1
    center_lr: float = 0.05
    sigma_lr: float = 0.03
    max_speed: float = 0.1
    # 0.5 rather than a heavier 0.9: high momentum makes the clipped
    # velocity orbit the optimum on precision objectives
    momentum: float = 0.5
    sigma_max_change: float = 0.2
    shaping: str = "centered_rank"  # or "raw"
    optimizer: str = "clipup"  # or "adam" / "sgd"

    def validate(self) -> None:
        if self.pop_size < 2 or self.pop_size % 2 != 0:
            raise ValueError(f"pop_size must be even and >= 2, got {self.pop_size}")
        if self.sigma_init <= 0:
            raise ValueError(f"sigma_init must be > 0, got {self.sigma_init}")
        if not 0.0 < self.sigma_max_change < 1.0:
            raise ValueError(
                f"sigma_max_change must be a fraction in (0, 1), got {self.sigma_max_change}"
            )
        if self.shaping not in ("centered_rank", "raw"):
            raise ValueError(f"unknown shaping {self.shaping!r}")
        if self.optimizer not in ("clipup", "adam", "sgd"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")


def centered_ranks(fitness: np.ndarray) -> np.ndarray:
    """Map fitness values to ranks spread affinely over [-0.5, 0.5].

    Ranks ascend with fitness. Ties receive the mean of the rank positions
    they span, so identical fitness vectors shape to all zeros and the
    output is invariant under any strictly increasing transform of the
    input.
    """
    fitness = np.asarray(fitness, dtype=np.float32).reshape(-1)
    n = fitness.shape[0]
    if n < 2:
        raise ValueError(f"centered_ranks requires at least 2 values, got {n}")
    order = np.argsort(fitness, kind="stable")
    ranks = np.empty(n, dtype=np.float32)
    ranks[order] = np.arange(n, dtype=np.float32)
    # average rank positions over groups of equal fitness
    sorted_vals = fitness[order]
    group_starts = np.flatnonzero(np.concatenate(([True], sorted_vals[1:] != sorted_vals[:-1])))
    group_ends = np.concatenate((group_starts[1:], [n]))
    for s, e in zip(group_starts, group_ends):
        if e - s > 1:
            ranks[order[s:e]] = np.float32(0.5) * np.float32(s + e - 1)
    return (ranks / np.float32(n - 1) - np.float32(0.5)).astype(np.float32)


def pgpe_gradients(
    eps: np.ndarray, f_plus: np.ndarray, f_minus: np.ndarray, sigma: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Estimate the center and sigma gradients from K mirrored pairs.

    g_mu      = mean_i [ (f+_i - f-_i)/2 * eps_i ]
    baseline  = mean_i [ (f+_i + f-_i)/2 ]
    g_sigma_j = mean_i [ ((f+_i + f-_i)/2 - baseline) * (eps_ij^2 - sigma_j^2) / sigma_j ]
    """
    eps = np.asarray(eps, dtype=np.float32)
    f_plus = np.asarray(f_plus, dtype=np.float32).reshape(-1)
    f_minus = np.asarray(f_minus, dtype=np.float32).reshape(-1)
    sigma = np.asarray(sigma, dtype=np.float32)
    k, d = eps.shape
    if f_plus.shape[0] != k or f_minus.shape[0] != k or sigma.shape[0] != d:
        raise ValueError(
            f"shape mismatch: eps {eps.shape}, f_plus {f_plus.shape}, "
            f"f_minus {f_minus.shape}, sigma {sigma.shape}"
        )
    direct = np.float32(0.5) * (f_plus - f_minus)
    g_mu = (direct[:, None] * eps).mean(axis=0).astype(np.float32)
    pair_mean = np.float32(0.5) * (f_plus + f_minus)
    baseline = pair_mean.mean(dtype=np.float32)
    advantage = pair_mean - baseline
    sigma_score = (eps * eps - sigma * sigma) / sigma
    g_sigma = (advantage[:, None] * sigma_score).mean(axis=0).astype(np.float32)
    return g_mu, g_sigma


class PGPE(NEAlgorithm):
    """Policy Gradients with Parameter-based Exploration."""

    def __init__(
        self,
        num_params: int,
        config: PgpeConfig | None = None,
        seed: int = 0,
        center_init: np.ndarray | None = None,
    ):
        config = config or PgpeConfig()
        config.validate()
        super().__init__(config.pop_size, num_params)
        self.config = config
        if center_init is None:
            self.mu = np.zeros(num_params, dtype=np.float32)
        else:
            self.mu = np.asarray(center_init, dtype=np.float32).copy()
            if self.mu.shape != (num_params,):
                raise ValueError(f"center_init shape {self.mu.shape} != ({num_params},)")
        self.sigma = np.full(num_params, config.sigma_init, dtype=np.float32)
        if config.optimizer == "clipup":
            self._opt = ClipUp(config.center_lr, config.momentum, config.max_speed)
        elif config.optimizer == "adam":
            self._opt = Adam(config.center_lr)
        else:
            self._opt = Sgd(config.center_lr)
        self._opt.init(num_params)
        self._key_root = fold_in(new_key(seed), 0x9E55)
        self.iteration = 0
        self._eps: np.ndarray | None = None
        self.best_score = -np.inf
        self.best_member = self.mu.copy()

    def _ask(self) -> np.ndarray:
        k = self.pop_size // 2
        eps_key = fold_in(self._key_root, self.iteration)
        self._eps = normal(eps_key, (k, self.num_params)) * self.sigma
        pop = np.empty((self.pop_size, self.num_params), dtype=np.float32)
        pop[0::2] = self.mu + self._eps
        pop[1::2] = self.mu - self._eps
        return pop

    def _tell(self, fitness: np.ndarray) -> None:
        raw = fitness
        best_idx = int(np.argmax(raw))
        if float(raw[best_idx]) > self.best_score:
            self.best_score = float(raw[best_idx])
            eps_row = self._eps[best_idx // 2]
            sign = np.float32(1.0) if best_idx % 2 == 0 else np.float32(-1.0)
            self.best_member = (self.mu + sign * eps_row).astype(np.float32)

        shaped = centered_ranks(raw) if self.config.shaping == "centered_rank" else raw
        g_mu, g_sigma = pgpe_gradients(self._eps, shaped[0::2], shaped[1::2], self.sigma)
        self.mu = (self.mu + self._opt.step(g_mu)).astype(np.float32)
        if self.config.sigma_lr > 0.0:
            proposed = self.sigma + np.float32(self.config.sigma_lr) * g_sigma
            c = np.float32(self.config.sigma_max_change)
            lo = (np.float32(1.0) - c) * self.sigma
            hi = (np.float32(1.0) + c) * self.sigma
            self.sigma = np.clip(proposed, lo, hi).astype(np.float32)
        self.iteration += 1
        self._eps = None

    @property
    def best_params(self) -> np.ndarray:
        """Current distribution center (the solution PGPE reports)."""
        return self.mu.copy()

    @property
    def sigma_mean(self) -> float:
        return float(self.sigma.mean())


class RandomSearch(NEAlgorithm):
    """Gaussian random search around the best point seen so far.

    A sanity baseline: ``ask`` draws P candidates from
    N(best, sigma_init^2 I); ``tell`` keeps the argmax member.
    """

    def __init__(self, num_params: int, pop_size: int = 64, sigma_init: float = 0.1, seed: int = 0):
        super().__init__(pop_size, num_params)
        self.sigma_init = float(sigma_init)
        self._key_root = fold_in(new_key(seed), 0x5EA2)
        self.iteration = 0
        self._pop: np.ndarray | None = None
        self.best_score = -np.inf
        self._best = np.zeros(num_params, dtype=np.float32)

    def _ask(self) -> np.ndarray:
        key = fold_in(self._key_root, self.iteration)
        noise = normal(key, (self.pop_size, self.num_params)) * np.float32(self.sigma_init)
        self._pop = (self._best + noise).astype(np.float32)
        return self._pop

    def _tell(self, fitness: np.ndarray) -> None:
        best_idx = int(np.argmax(fitness))
        if float(fitness[best_idx]) > self.best_score:
            self.best_score = float(fitness[best_idx])
            self._best = self._pop[best_idx].copy()
        self.iteration += 1
        self._pop = None

    @property
    def best_params(self) -> np.ndarray:
        return self._best.copy()

    @property
    def sigma_mean(self) -> float:
        return self.sigma_init
