"""Image approximation with alpha-composited triangles.

The genome is 50 triangles x (3 vertices + rgba), all components in
[0, 1]. Rendering composites the triangles in genome order over a white
canvas; the single-step fitness is the negative mean squared error
against a target image.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import StepResult, TaskState, VectorizedTask
from ..rng import Key

__all__ = ["render_triangles", "PaintTask", "TRIANGLE_PARAMS", "DEFAULT_TRIANGLES"]

TRIANGLE_PARAMS = 10  # 3 * (x, y) + r, g, b, alpha
DEFAULT_TRIANGLES = 50


def render_triangles(genome: np.ndarray, width: int, height: int) -> np.ndarray:
    """Rasterize a triangle genome onto a white height x width x 3 canvas.

    Values are clamped to [0, 1] before use. Pixel membership is decided
    by a half-plane test at pixel centers (either winding accepted);
    colors composite as c <- (1 - a) * c + a * rgb in genome order.
    """
    genome = np.clip(np.asarray(genome, dtype=np.float32).reshape(-1, TRIANGLE_PARAMS), 0.0, 1.0)
    canvas = np.ones((height, width, 3), dtype=np.float32)
    px = (np.arange(width, dtype=np.float32) + np.float32(0.5))[None, :]
    py = (np.arange(height, dtype=np.float32) + np.float32(0.5))[:, None]
    for tri in genome:
        vx = tri[0:6:2] * np.float32(width)
        vy = tri[1:6:2] * np.float32(height)
        rgb = tri[6:9]
        alpha = tri[9]
        x0 = max(int(np.floor(vx.min() - 0.5)), 0)
        x1 = min(int(np.ceil(vx.max() - 0.5)) + 1, width)
        y0 = max(int(np.floor(vy.min() - 0.5)), 0)
        y1 = min(int(np.ceil(vy.max() - 0.5)) + 1, height)
        if x0 >= x1 or y0 >= y1:
            continue
        cx = px[:, x0:x1]
        cy = py[y0:y1, :]
        edges = []
        for k in range(3):
            ax, ay = vx[k], vy[k]
            bx, by = vx[(k + 1) % 3], vy[(k + 1) % 3]
            edges.append((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))
        inside = (edges[0] >= 0) & (edges[1] >= 0) & (edges[2] >= 0)
        inside |= (edges[0] <= 0) & (edges[1] <= 0) & (edges[2] <= 0)
        area2 = (vx[1] - vx[0]) * (vy[2] - vy[0]) - (vy[1] - vy[0]) * (vx[2] - vx[0])
        if area2 == 0.0:
            continue
        region = canvas[y0:y1, x0:x1]
        blended = (np.float32(1.0) - alpha) * region + alpha * rgb
        canvas[y0:y1, x0:x1] = np.where(inside[:, :, None], blended, region)
    return canvas


@dataclass(frozen=True)
class PaintRecord:
    done: bool


class PaintTask(VectorizedTask):
    act_dim = DEFAULT_TRIANGLES * TRIANGLE_PARAMS
    max_steps = 1

    def __init__(self, target: np.ndarray, n_triangles: int = DEFAULT_TRIANGLES):
        target = np.asarray(target, dtype=np.float32)
        if target.ndim != 3 or target.shape[2] != 3:
            raise ValueError(f"target must be H x W x 3, got {target.shape}")
        self.target = target
        self.n_triangles = int(n_triangles)
        self.genome_len = self.n_triangles * TRIANGLE_PARAMS
        self.act_dim = self.genome_len
        self.obs_dim = 1

    def reset(self, keys: Sequence[Key], pop_size: int) -> TaskState:
        if len(keys) == 0:
            raise ValueError("reset requires at least one lane key")
        obs = np.zeros((pop_size, len(keys), 1), dtype=np.float32)
        return TaskState(obs=obs, extra=PaintRecord(done=False))

    def step(self, state: TaskState, actions: np.ndarray) -> StepResult:
        r: PaintRecord = state.extra
        p, b = state.obs.shape[:2]
        actions = np.asarray(actions, dtype=np.float32)
        if actions.shape != (p, b, self.genome_len):
            raise ValueError(
                f"expected genomes of shape {(p, b, self.genome_len)}, got {actions.shape}"
            )
        done = np.ones((p, b), dtype=bool)
        if r.done:
            return StepResult(state, np.zeros((p, b), dtype=np.float32), done)
        h, w = self.target.shape[:2]
        reward = np.empty((p, b), dtype=np.float32)
        for i in range(p):
            for j in range(b):
                img = render_triangles(actions[i, j], w, h)
                reward[i, j] = -np.mean((img - self.target) ** 2, dtype=np.float32)
        new_state = TaskState(obs=state.obs, extra=PaintRecord(done=True))
        return StepResult(new_state, reward, done)
