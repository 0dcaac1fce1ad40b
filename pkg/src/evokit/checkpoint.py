"""Binary checkpoint persistence.

Layout: magic "EVOC" (4 ASCII bytes), version u32 little-endian, parameter
count u64 little-endian, then that many float32 values little-endian. The
file size is therefore exactly 16 + 4 * D bytes. A text sidecar at
``path + ".meta"`` carries ``key=value`` lines (algo, iteration, score).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .core import FormatError

__all__ = ["Checkpoint", "save_checkpoint", "load_checkpoint"]

MAGIC = b"EVOC"
VERSION = 1


@dataclass(frozen=True)
class Checkpoint:
    params: np.ndarray
    algo: str = ""
    iteration: int = 0
    score: float = float("nan")


def save_checkpoint(path: str, ckpt: Checkpoint) -> None:
    params = np.ascontiguousarray(ckpt.params, dtype="<f4").reshape(-1)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", VERSION))
        f.write(struct.pack("<Q", params.size))
        f.write(params.tobytes())
    with open(path + ".meta", "w", encoding="utf-8") as f:
        f.write(f"algo={ckpt.algo}\n")
        f.write(f"iteration={ckpt.iteration}\n")
        f.write(f"score={ckpt.score!r}\n")


def load_checkpoint(path: str) -> Checkpoint:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 16:
        raise FormatError(f"truncated checkpoint: {len(data)} bytes < 16-byte header")
    if data[:4] != MAGIC:
        raise FormatError(f"bad checkpoint magic: {data[:4]!r}")
    version = struct.unpack_from("<I", data, 4)[0]
    if version != VERSION:
        raise FormatError(f"unsupported checkpoint version {version}")
    dim = struct.unpack_from("<Q", data, 8)[0]
    expected = 16 + 4 * dim
    if len(data) != expected:
        raise FormatError(
            f"bad checkpoint payload: expected {expected} bytes for D={dim}, got {len(data)}"
        )
    params = np.frombuffer(data, dtype="<f4", offset=16).copy()

    algo, iteration, score = "", 0, float("nan")
    try:
        with open(path + ".meta", "r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line or "=" not in line:
                    continue
                key, value = line.split("=", 1)
                if key == "algo":
                    algo = value
                elif key == "iteration":
                    iteration = int(value)
                elif key == "score":
                    score = float(value)
    except FileNotFoundError:
        pass
    return Checkpoint(params=params, algo=algo, iteration=iteration, score=score)
