"""Cart-pole swing-up task.

The pole starts hanging (easy) or anywhere (hard) and the policy pushes
the cart to swing it up and balance. Reward per step is (1 + cos(theta))/2
with theta = 0 upright, so a 1000-step episode scores at most 1000.
An episode ends when the cart leaves the track (|x| > 2.4, scoring 0 on
that step) or after 1000 steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import StepResult, TaskState, VectorizedTask
from ..rng import Key, uniform

__all__ = ["CartPoleSwingUp", "CartPoleRecord", "cartpole_energy"]

GRAVITY = 9.8
CART_MASS = 1.0
POLE_MASS = 0.1
POLE_HALF_LEN = 0.5
FORCE_SCALE = 10.0
DT = 0.01
X_LIMIT = 2.4
MAX_STEPS = 1000


@dataclass(frozen=True)
class CartPoleRecord:
    x: np.ndarray  # P x B
    x_dot: np.ndarray
    theta: np.ndarray  # radians, 0 = upright
    theta_dot: np.ndarray
    t: np.ndarray  # P x B int32 step count
    done: np.ndarray  # P x B bool


def _observe(r: CartPoleRecord) -> np.ndarray:
    return np.stack(
        [r.x, r.x_dot, np.cos(r.theta), np.sin(r.theta), r.theta_dot], axis=-1
    ).astype(np.float32)


class CartPoleSwingUp(VectorizedTask):
    obs_dim = 5
    act_dim = 1
    max_steps = MAX_STEPS

    def __init__(self, hard: bool = False):
        self.hard = hard

    def reset(self, keys: Sequence[Key], pop_size: int) -> TaskState:
        if len(keys) == 0:
            raise ValueError("reset requires at least one lane key")
        b = len(keys)
        lanes = np.empty((b, 4), dtype=np.float32)
        for j, key in enumerate(keys):
            u = uniform(key, (4,))
            if self.hard:
                lanes[j, 0] = -1.0 + 2.0 * u[0]  # x
                lanes[j, 1] = -0.5 + 1.0 * u[1]  # x_dot
                lanes[j, 2] = -np.pi + 2.0 * np.pi * u[2]  # theta
                lanes[j, 3] = -0.5 + 1.0 * u[3]  # theta_dot
            else:
                lanes[j, 0] = -0.1 + 0.2 * u[0]
                lanes[j, 1] = -0.1 + 0.2 * u[1]
                lanes[j, 2] = np.pi + (-0.1 + 0.2 * u[2])
                lanes[j, 3] = -0.1 + 0.2 * u[3]
        tiled = np.tile(lanes[None, :, :], (pop_size, 1, 1))
        record = CartPoleRecord(
            x=tiled[:, :, 0].copy(),
            x_dot=tiled[:, :, 1].copy(),
            theta=tiled[:, :, 2].copy(),
            theta_dot=tiled[:, :, 3].copy(),
            t=np.zeros((pop_size, b), dtype=np.int32),
            done=np.zeros((pop_size, b), dtype=bool),
        )
        return TaskState(obs=_observe(record), extra=record)

    def step(self, state: TaskState, actions: np.ndarray) -> StepResult:
        r: CartPoleRecord = state.extra
        actions = np.asarray(actions, dtype=np.float32)
        if actions.shape != r.x.shape + (1,):
            raise ValueError(f"expected actions of shape {r.x.shape + (1,)}, got {actions.shape}")
        alive = ~r.done
        u = FORCE_SCALE * np.clip(actions[..., 0], -1.0, 1.0)

        sin_t = np.sin(r.theta)
        cos_t = np.cos(r.theta)
        total_mass = CART_MASS + POLE_MASS
        pm_l = POLE_MASS * POLE_HALF_LEN
        theta_acc = (
            GRAVITY * sin_t + cos_t * (-u - pm_l * r.theta_dot**2 * sin_t) / total_mass
        ) / (POLE_HALF_LEN * (4.0 / 3.0 - POLE_MASS * cos_t**2 / total_mass))
        x_acc = (u + pm_l * (r.theta_dot**2 * sin_t - theta_acc * cos_t)) / total_mass

        # semi-implicit Euler: velocities first, then positions
        theta_dot = r.theta_dot + DT * theta_acc
        x_dot = r.x_dot + DT * x_acc
        theta = r.theta + DT * theta_dot
        x = r.x + DT * x_dot
        t = r.t + 1

        violated = np.abs(x) > X_LIMIT
        truncated = t >= MAX_STEPS
        reward = np.where(
            alive & ~violated, (1.0 + np.cos(theta)) / 2.0, 0.0
        ).astype(np.float32)
        new_done = r.done | (alive & (violated | truncated))

        new_record = CartPoleRecord(
            x=np.where(alive, x, r.x).astype(np.float32),
            x_dot=np.where(alive, x_dot, r.x_dot).astype(np.float32),
            theta=np.where(alive, theta, r.theta).astype(np.float32),
            theta_dot=np.where(alive, theta_dot, r.theta_dot).astype(np.float32),
            t=np.where(alive, t, r.t).astype(np.int32),
            done=new_done,
        )
        return StepResult(TaskState(obs=_observe(new_record), extra=new_record), reward, new_done)


def cartpole_energy(record: CartPoleRecord) -> np.ndarray:
    """Total mechanical energy per lane (cart KE + pole KE + pole PE).

    The pole is a uniform rod of half-length l pivoted at the cart, so its
    kinetic energy is the center-of-mass translation plus rotation about
    the center (I_cm = m l^2 / 3).
    """
    l = POLE_HALF_LEN
    vx_cm = record.x_dot + l * record.theta_dot * np.cos(record.theta)
    vy_cm = -l * record.theta_dot * np.sin(record.theta)
    cart_ke = 0.5 * CART_MASS * record.x_dot**2
    pole_ke = 0.5 * POLE_MASS * (vx_cm**2 + vy_cm**2) + 0.5 * (
        POLE_MASS * l**2 / 3.0
    ) * record.theta_dot**2
    pole_pe = POLE_MASS * GRAVITY * l * np.cos(record.theta)
    return cart_ke + pole_ke + pole_pe
