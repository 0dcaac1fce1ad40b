"""Flat-genome parameter layout.

Every policy stores its weights in one flat float32 vector per member.
A :class:`ParamLayout` records the (name, shape, offset) of each block in
definition order; blocks are contiguous and row-major, weights first and
bias second within a layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ParamLayout"]


@dataclass(frozen=True)
class ParamLayout:
    entries: tuple[tuple[str, tuple[int, ...], int], ...]
    total: int

    @classmethod
    def build(cls, blocks: list[tuple[str, tuple[int, ...]]]) -> "ParamLayout":
        entries = []
        offset = 0
        for name, shape in blocks:
            entries.append((name, tuple(int(s) for s in shape), offset))
            offset += int(np.prod(shape))
        return cls(entries=tuple(entries), total=offset)

    def slice(self, params: np.ndarray, name: str) -> np.ndarray:
        """View of block ``name`` from a (P, D) matrix, shaped (P, *shape)."""
        for block_name, shape, offset in self.entries:
            if block_name == name:
                size = int(np.prod(shape))
                return params[:, offset : offset + size].reshape(params.shape[0], *shape)
        raise KeyError(name)

    def check(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=np.float32)
        if params.ndim != 2 or params.shape[1] != self.total:
            raise ValueError(
                f"params shape {params.shape} does not match layout (P, {self.total})"
            )
        return params

    def unflatten(self, params: np.ndarray) -> dict[str, np.ndarray]:
        return {name: self.slice(params, name) for name, _, _ in self.entries}

    def flatten(self, blocks: dict[str, np.ndarray]) -> np.ndarray:
        """Inverse of :meth:`unflatten` for a (P, D) matrix."""
        p = next(iter(blocks.values())).shape[0]
        out = np.empty((p, self.total), dtype=np.float32)
        for name, shape, offset in self.entries:
            size = int(np.prod(shape))
            out[:, offset : offset + size] = blocks[name].reshape(p, size)
        return out
