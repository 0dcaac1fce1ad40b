"""Center-update rules used by the distribution-based algorithms.

All rules follow the ascent convention: the returned step is *added* to
the distribution center.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["clipup_step", "AdamState", "adam_step", "ClipUp", "Adam", "Sgd"]


def _clip_norm(v: np.ndarray, max_norm: float) -> np.ndarray:
    # Rescaling in float32 can leave the norm an ulp above the bound, so
    # shrink again until the bound actually holds.
    for _ in range(8):
        n = float(np.linalg.norm(v.astype(np.float64)))
        if n <= max_norm:
            break
        factor = min(np.float32(max_norm / n), np.float32(1.0) - np.float32(2.0**-23))
        v = v * factor
    return v


def clipup_step(
    velocity: np.ndarray, g: np.ndarray, alpha: float, momentum: float, max_speed: float
) -> tuple[np.ndarray, np.ndarray]:
    """One ClipUp update: normalize the gradient direction, apply momentum,
    clip the velocity norm to ``max_speed``.

    Returns ``(velocity', step)`` where ``step == velocity'``. A zero
    gradient contributes a zero step (no direction to follow).
    """
    g = np.asarray(g, dtype=np.float32)
    g_norm = float(np.linalg.norm(g.astype(np.float64)))
    if g_norm == 0.0:
        step = np.zeros_like(g)
    else:
        # normalize in float64: alpha / g_norm alone can overflow for
        # subnormal gradients
        step = (alpha * (g.astype(np.float64) / g_norm)).astype(np.float32)
    v = np.float32(momentum) * velocity + step
    v = _clip_norm(v, max_speed)
    return v, v.copy()


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros(cls, dim: int) -> "AdamState":
        return cls(m=np.zeros(dim, dtype=np.float32), v=np.zeros(dim, dtype=np.float32))


def adam_step(state: AdamState, g: np.ndarray, alpha: float) -> tuple[AdamState, np.ndarray]:
    """Standard bias-corrected Adam; returns the new state and the step."""
    g = np.asarray(g, dtype=np.float32)
    t = state.t + 1
    b1 = np.float32(state.beta1)
    b2 = np.float32(state.beta2)
    m = b1 * state.m + (np.float32(1.0) - b1) * g
    v = b2 * state.v + (np.float32(1.0) - b2) * g * g
    m_hat = m / np.float32(1.0 - state.beta1**t)
    v_hat = v / np.float32(1.0 - state.beta2**t)
    step = np.float32(alpha) * m_hat / (np.sqrt(v_hat) + np.float32(state.eps))
    new_state = AdamState(m=m, v=v, t=t, beta1=state.beta1, beta2=state.beta2, eps=state.eps)
    return new_state, step.astype(np.float32)


@dataclass
class ClipUp:
    """Stateful wrapper around :func:`clipup_step`."""

    alpha: float
    momentum: float
    max_speed: float
    velocity: np.ndarray = None  # type: ignore[assignment]

    def init(self, dim: int) -> None:
        self.velocity = np.zeros(dim, dtype=np.float32)

    def step(self, g: np.ndarray) -> np.ndarray:
        self.velocity, step = clipup_step(
            self.velocity, g, self.alpha, self.momentum, self.max_speed
        )
        return step


@dataclass
class Adam:
    alpha: float
    state: AdamState = None  # type: ignore[assignment]

    def init(self, dim: int) -> None:
        self.state = AdamState.zeros(dim)

    def step(self, g: np.ndarray) -> np.ndarray:
        self.state, step = adam_step(self.state, g, self.alpha)
        return step


@dataclass
class Sgd:
    alpha: float

    def init(self, dim: int) -> None:
        pass

    def step(self, g: np.ndarray) -> np.ndarray:
        return np.float32(self.alpha) * np.asarray(g, dtype=np.float32)
