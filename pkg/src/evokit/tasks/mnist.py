"""MNIST classification as a single-step task, plus the IDX file loader.

Each lane key samples a batch of images (shared by the whole population);
the policy emits per-image logits and the step's reward is the lane's
classification accuracy.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import FormatError, StepResult, TaskState, VectorizedTask
from ..rng import Key, fold_in, random_words

__all__ = ["MnistBatch", "load_idx_images", "load_idx_labels", "load_mnist", "MnistTask"]

IMAGE_MAGIC = 2051
LABEL_MAGIC = 2049

_TAG_SAMPLE = 11


@dataclass(frozen=True)
class MnistBatch:
    images: np.ndarray  # n x 28 x 28 float32 in [0, 1]
    labels: np.ndarray  # n int64 in 0..9


def _read_be32(data: bytes, offset: int, field: str) -> int:
    if offset + 4 > len(data):
        raise FormatError(f"truncated IDX file: missing {field}")
    return struct.unpack_from(">i", data, offset)[0]


def load_idx_images(path: str) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    magic = _read_be32(data, 0, "magic")
    if magic != IMAGE_MAGIC:
        raise FormatError(f"bad image magic: expected {IMAGE_MAGIC}, got {magic}")
    n = _read_be32(data, 4, "count")
    rows = _read_be32(data, 8, "rows")
    cols = _read_be32(data, 12, "cols")
    if rows != 28 or cols != 28:
        raise FormatError(f"bad image dims: expected 28x28, got {rows}x{cols}")
    expected = 16 + n * rows * cols
    if len(data) != expected:
        raise FormatError(
            f"bad image payload: expected {expected} bytes for count {n}, got {len(data)}"
        )
    pixels = np.frombuffer(data, dtype=np.uint8, offset=16)
    return (pixels.reshape(n, rows, cols).astype(np.float32)) / np.float32(255.0)


def load_idx_labels(path: str) -> np.ndarray:
    with open(path, "rb") as f:
        data = f.read()
    magic = _read_be32(data, 0, "magic")
    if magic != LABEL_MAGIC:
        raise FormatError(f"bad label magic: expected {LABEL_MAGIC}, got {magic}")
    n = _read_be32(data, 4, "count")
    expected = 8 + n
    if len(data) != expected:
        raise FormatError(
            f"bad label payload: expected {expected} bytes for count {n}, got {len(data)}"
        )
    labels = np.frombuffer(data, dtype=np.uint8, offset=8).astype(np.int64)
    if labels.size and labels.max() > 9:
        raise FormatError(f"bad label values: max {labels.max()} > 9")
    return labels


def load_mnist(images_path: str, labels_path: str) -> MnistBatch:
    images = load_idx_images(images_path)
    labels = load_idx_labels(labels_path)
    if images.shape[0] != labels.shape[0]:
        raise FormatError(
            f"count mismatch: {images.shape[0]} images vs {labels.shape[0]} labels"
        )
    return MnistBatch(images=images, labels=labels)


@dataclass(frozen=True)
class MnistRecord:
    labels: np.ndarray  # B x batch
    done: bool


class MnistTask(VectorizedTask):
    """Single-step classification over sampled image batches."""

    obs_dim = 28 * 28
    act_dim = 10
    max_steps = 1

    def __init__(self, data: MnistBatch, batch_size: int = 1024):
        self.data = data
        self.batch_size = int(batch_size)

    def reset(self, keys: Sequence[Key], pop_size: int) -> TaskState:
        if len(keys) == 0:
            raise ValueError("reset requires at least one lane key")
        n = self.data.images.shape[0]
        lanes = []
        labels = []
        for key in keys:
            words = random_words(fold_in(key, _TAG_SAMPLE), self.batch_size)
            idx = (words % np.uint64(n)).astype(np.int64)
            lanes.append(self.data.images[idx])
            labels.append(self.data.labels[idx])
        lane_images = np.stack(lanes)  # B x batch x 28 x 28
        obs = np.broadcast_to(lane_images[None], (pop_size,) + lane_images.shape)
        return TaskState(obs=obs, extra=MnistRecord(labels=np.stack(labels), done=False))

    def step(self, state: TaskState, actions: np.ndarray) -> StepResult:
        r: MnistRecord = state.extra
        p, b = state.obs.shape[:2]
        actions = np.asarray(actions)
        if actions.shape != (p, b, self.batch_size, 10):
            raise ValueError(
                f"expected logits of shape {(p, b, self.batch_size, 10)}, got {actions.shape}"
            )
        done = np.ones((p, b), dtype=bool)
        if r.done:
            return StepResult(state, np.zeros((p, b), dtype=np.float32), done)
        pred = actions.argmax(axis=-1)
        correct = pred == r.labels[None]
        reward = correct.mean(axis=-1, dtype=np.float32)
        new_state = TaskState(obs=state.obs, extra=MnistRecord(labels=r.labels, done=True))
        return StepResult(new_state, reward, done)
