"""Water world: eat food, avoid poison, in a unit-square arena.

Each lane holds an arena with drifting food and poison items. The agent
senses the world through 16 rays (food / poison / wall channels, plus an
other-agent channel in multi-agent mode) and steers with a 2-D
acceleration. Contact with an item eats it for +1 (food) or -1 (poison)
and the item respawns uniformly, so the item count never changes.

In multi-agent mode the whole population shares one arena: member i
controls agent i and collects its own reward, which couples the members
and rules out partitioning the population across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import StepResult, TaskState, VectorizedTask
from ..rng import Key, fold_in, uniform

__all__ = ["WaterWorld", "WaterWorldRecord", "N_RAYS", "SENSOR_RANGE"]

N_RAYS = 16
SENSOR_RANGE = 0.21
AGENT_RADIUS = 0.03
ITEM_RADIUS = 0.016
CONTACT_DIST = AGENT_RADIUS + ITEM_RADIUS
AGENT_ACCEL = 0.002
AGENT_DRAG = 0.95
AGENT_MAX_SPEED = 0.01
ITEM_SPEED = 0.005
MAX_STEPS = 500

# fold_in tags for the per-lane randomness streams
_TAG_ITEM_POS = 1
_TAG_ITEM_HEADING = 2
_TAG_RESPAWN = 4

_RAY_ANGLES = 2.0 * np.pi * np.arange(N_RAYS, dtype=np.float64) / N_RAYS
_RAY_DIRS = np.stack([np.cos(_RAY_ANGLES), np.sin(_RAY_ANGLES)], axis=-1).astype(np.float32)


@dataclass(frozen=True)
class WaterWorldRecord:
    agent_pos: np.ndarray  # P x B x 2
    agent_vel: np.ndarray  # P x B x 2
    item_pos: np.ndarray  # P x B x I x 2 (multi-agent: 1 x 1 x I x 2, shared)
    item_vel: np.ndarray
    t: int
    lane_keys: tuple[Key, ...]  # B reset keys, drive the respawn stream


def _sector_bins(rel: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sector index and center distance of each circle around the agent.

    Each of the 16 rays senses the 22.5-degree sector centred on its
    heading, so there are no blind gaps between rays.
    """
    sector = np.float32(2.0 * np.pi / N_RAYS)
    dist = np.sqrt(rel[..., 0] ** 2 + rel[..., 1] ** 2)
    angle = np.arctan2(rel[..., 1], rel[..., 0]).astype(np.float32)
    bins = np.floor(((angle + 0.5 * sector) % np.float32(2.0 * np.pi)) / sector)
    return np.clip(bins, 0, N_RAYS - 1).astype(np.int8), dist


def _ray_hits(rel: np.ndarray, radius: float, exclude_diag: bool = False) -> np.ndarray:
    """Per-ray normalized distance to the nearest circle in the ray's sector.

    ``rel`` is (..., I, 2), circle centers relative to the agent. Returns
    (..., N_RAYS) in [0, 1]; 1.0 where nothing is within sensor range.
    With ``exclude_diag`` the trailing (P, P) pair block ignores self-pairs.
    """
    if rel.shape[-2] == 0:
        return np.ones(rel.shape[:-2] + (N_RAYS,), dtype=np.float32)
    bins, dist = _sector_bins(rel)
    surface = np.maximum(dist - np.float32(radius), np.float32(0.0))
    if exclude_diag:
        p = rel.shape[-2]
        eye = np.eye(p, dtype=bool)
        surface = np.where(eye[:, None, :], np.float32(2.0 * SENSOR_RANGE), surface)
    surface = np.minimum(surface, np.float32(SENSOR_RANGE))
    readings = np.empty(rel.shape[:-2] + (N_RAYS,), dtype=np.float32)
    for k in range(N_RAYS):
        masked = np.where(bins == k, surface, np.float32(SENSOR_RANGE))
        readings[..., k] = masked.min(axis=-1)
    return readings / np.float32(SENSOR_RANGE)


def _wall_distance(pos: np.ndarray) -> np.ndarray:
    """Per-ray normalized distance to the arena walls, (..., N_RAYS)."""
    out = np.full(pos.shape[:-1] + (N_RAYS,), SENSOR_RANGE, dtype=np.float32)
    for k in range(N_RAYS):
        dx, dy = float(_RAY_DIRS[k, 0]), float(_RAY_DIRS[k, 1])
        t_min = np.full(pos.shape[:-1], np.inf, dtype=np.float32)
        if abs(dx) > 1e-9:
            bound = 1.0 if dx > 0 else 0.0
            t_min = np.minimum(t_min, (bound - pos[..., 0]) / dx)
        if abs(dy) > 1e-9:
            bound = 1.0 if dy > 0 else 0.0
            t_min = np.minimum(t_min, (bound - pos[..., 1]) / dy)
        out[..., k] = np.minimum(t_min, SENSOR_RANGE)
    return out / np.float32(SENSOR_RANGE)


class WaterWorld(VectorizedTask):
    act_dim = 2
    max_steps = MAX_STEPS

    def __init__(
        self,
        n_food: int = 20,
        n_poison: int = 10,
        multi_agent: bool = False,
        n_agents: int | None = None,
    ):
        self.n_food = int(n_food)
        self.n_poison = int(n_poison)
        self.n_items = self.n_food + self.n_poison
        self.multi_agent = bool(multi_agent)
        self.n_agents = n_agents
        self.obs_dim = (4 if multi_agent else 3) * N_RAYS + 2

    def _item_kind_food(self) -> np.ndarray:
        kinds = np.zeros(self.n_items, dtype=bool)
        kinds[: self.n_food] = True
        return kinds

    def reset(self, keys: Sequence[Key], pop_size: int) -> TaskState:
        if len(keys) == 0:
            raise ValueError("reset requires at least one lane key")
        b = len(keys)
        if self.multi_agent:
            if b != 1:
                raise ValueError("multi-agent water world uses a single lane (B = 1)")
            if self.n_agents is not None and self.n_agents != pop_size:
                raise ValueError(
                    f"configured n_agents {self.n_agents} != population size {pop_size}"
                )
        item_pos = np.empty((b, self.n_items, 2), dtype=np.float32)
        item_vel = np.empty((b, self.n_items, 2), dtype=np.float32)
        for j, key in enumerate(keys):
            item_pos[j] = uniform(fold_in(key, _TAG_ITEM_POS), (self.n_items, 2))
            headings = uniform(fold_in(key, _TAG_ITEM_HEADING), (self.n_items,), 0.0, 2.0 * np.pi)
            item_vel[j, :, 0] = ITEM_SPEED * np.cos(headings)
            item_vel[j, :, 1] = ITEM_SPEED * np.sin(headings)

        if self.multi_agent:
            # all agents start at the arena center: agent-agent collisions are
            # ignored, and identical spawns keep mirrored solver pairs
            # comparable (their fitness difference reflects parameters, not
            # spawn luck)
            agent_pos = np.full((pop_size, 1, 2), 0.5, dtype=np.float32)
            items_p = item_pos[None, :, :, :]  # shared arena
            items_v = item_vel[None, :, :, :]
        else:
            agent_pos = np.full((pop_size, b, 2), 0.5, dtype=np.float32)
            items_p = np.tile(item_pos[None], (pop_size, 1, 1, 1))
            items_v = np.tile(item_vel[None], (pop_size, 1, 1, 1))
        record = WaterWorldRecord(
            agent_pos=agent_pos,
            agent_vel=np.zeros_like(agent_pos),
            item_pos=items_p,
            item_vel=items_v,
            t=0,
            lane_keys=tuple(keys),
        )
        return TaskState(obs=self._observe(record, pop_size, b), extra=record)

    def _observe(self, r: WaterWorldRecord, p: int, b: int) -> np.ndarray:
        kinds = self._item_kind_food()
        rel = r.item_pos - r.agent_pos[..., None, :]  # broadcasts over shared arenas
        food_obs = _ray_hits(rel[..., kinds, :], ITEM_RADIUS)
        poison_obs = _ray_hits(rel[..., ~kinds, :], ITEM_RADIUS)
        wall_obs = _wall_distance(r.agent_pos)
        channels = [food_obs, poison_obs, wall_obs]
        if self.multi_agent:
            others = r.agent_pos[:, 0, :]  # P x 2 (B = 1 in multi-agent mode)
            rel_agents = others[None, None, :, :] - r.agent_pos[:, :, None, :]  # P x B x P x 2
            channels.append(_ray_hits(rel_agents, AGENT_RADIUS, exclude_diag=True))
        obs = np.concatenate(channels + [r.agent_vel / AGENT_MAX_SPEED], axis=-1)
        return np.ascontiguousarray(obs, dtype=np.float32)

    def _respawn_draws(self, lane_key: Key, t: int, item_idx: int) -> tuple[np.ndarray, float]:
        key = fold_in(fold_in(fold_in(lane_key, _TAG_RESPAWN), t), item_idx)
        draws = uniform(key, (3,))
        pos = draws[:2]
        heading = 2.0 * np.pi * float(draws[2])
        return pos, heading

    def step(self, state: TaskState, actions: np.ndarray) -> StepResult:
        r: WaterWorldRecord = state.extra
        p, b = r.agent_pos.shape[:2]
        actions = np.asarray(actions, dtype=np.float32)
        if actions.shape != (p, b, 2):
            raise ValueError(f"expected actions of shape {(p, b, 2)}, got {actions.shape}")
        done_before = r.t >= MAX_STEPS
        if done_before:
            done = np.ones((p, b), dtype=bool)
            return StepResult(state, np.zeros((p, b), dtype=np.float32), done)

        accel = np.clip(actions, -1.0, 1.0) * np.float32(AGENT_ACCEL)
        vel = np.float32(AGENT_DRAG) * r.agent_vel + accel
        speed = np.linalg.norm(vel.astype(np.float64), axis=-1, keepdims=True)
        scale = np.where(speed > AGENT_MAX_SPEED, AGENT_MAX_SPEED / np.maximum(speed, 1e-12), 1.0)
        vel = (vel * scale).astype(np.float32)
        pos = np.clip(r.agent_pos + vel, 0.0, 1.0).astype(np.float32)

        item_pos = r.item_pos + r.item_vel
        item_vel = r.item_vel.copy()
        for _ in range(2):  # reflect off both walls if needed
            low = item_pos < 0.0
            item_pos = np.where(low, -item_pos, item_pos)
            high = item_pos > 1.0
            item_pos = np.where(high, 2.0 - item_pos, item_pos)
            item_vel = np.where(low | high, -item_vel, item_vel)
        item_pos = item_pos.astype(np.float32)
        item_vel = item_vel.astype(np.float32)

        kinds = self._item_kind_food()
        t_next = r.t + 1
        if self.multi_agent:
            reward, item_pos, item_vel = self._eat_multi(
                pos, item_pos, item_vel, kinds, r.lane_keys[0], r.t
            )
        else:
            reward, item_pos, item_vel = self._eat_single(
                pos, item_pos, item_vel, kinds, r.lane_keys, r.t
            )

        done = np.full((p, b), t_next >= MAX_STEPS, dtype=bool)
        record = WaterWorldRecord(
            agent_pos=pos,
            agent_vel=vel,
            item_pos=item_pos,
            item_vel=item_vel,
            t=t_next,
            lane_keys=r.lane_keys,
        )
        return StepResult(
            TaskState(obs=self._observe(record, p, b), extra=record),
            reward.astype(np.float32),
            done,
        )

    def _eat_single(self, agent_pos, item_pos, item_vel, kinds, lane_keys, t):
        p, b = agent_pos.shape[:2]
        dists = np.linalg.norm(item_pos - agent_pos[:, :, None, :], axis=-1)
        eaten = dists < CONTACT_DIST  # P x B x I
        reward = (eaten[..., kinds].sum(axis=-1) - eaten[..., ~kinds].sum(axis=-1)).astype(
            np.float32
        )
        if eaten.any():
            item_pos = item_pos.copy()
            item_vel = item_vel.copy()
            for i, j, idx in np.argwhere(eaten):
                new_pos, heading = self._respawn_draws(lane_keys[j], t, int(idx))
                item_pos[i, j, idx] = new_pos
                item_vel[i, j, idx] = (
                    ITEM_SPEED * np.cos(heading),
                    ITEM_SPEED * np.sin(heading),
                )
        return reward, item_pos, item_vel

    def _eat_multi(self, agent_pos, item_pos, item_vel, kinds, lane_key, t):
        p = agent_pos.shape[0]
        agents = agent_pos[:, 0, :]  # P x 2
        dists = np.linalg.norm(item_pos[0, 0][None, :, :] - agents[:, None, :], axis=-1)
        contact = dists < CONTACT_DIST  # P x I
        reward = np.zeros((p, 1), dtype=np.float32)
        if contact.any():
            item_pos = item_pos.copy()
            item_vel = item_vel.copy()
            for idx in np.flatnonzero(contact.any(axis=0)):
                # the closest contacting agent eats the item
                cands = np.flatnonzero(contact[:, idx])
                eater = cands[np.argmin(dists[cands, idx])]
                reward[eater, 0] += 1.0 if kinds[idx] else -1.0
                new_pos, heading = self._respawn_draws(lane_key, t, int(idx))
                item_pos[0, 0, idx] = new_pos
                item_vel[0, 0, idx] = (
                    ITEM_SPEED * np.cos(heading),
                    ITEM_SPEED * np.sin(heading),
                )
        return reward, item_pos, item_vel
