"""Small batched ConvNet classifier (28x28 grayscale, 10 classes).

Fixed architecture: 3x3x8 same-pad conv + ReLU, 2x2 maxpool, 3x3x16
same-pad conv + ReLU, 2x2 maxpool, dense 784 -> 10. Parameter count is
80 + 1168 + 7850 = 9098.
"""

from __future__ import annotations

import numpy as np

from ..core import PolicyNetwork, PolicyState, TaskState
from .layout import ParamLayout

__all__ = ["ConvNetPolicy", "convnet_layout", "conv2d_same", "maxpool2"]

CONVNET_PARAM_COUNT = 9098


def convnet_layout() -> ParamLayout:
    return ParamLayout.build(
        [
            ("conv1_w", (3, 3, 1, 8)),
            ("conv1_b", (8,)),
            ("conv2_w", (3, 3, 8, 16)),
            ("conv2_b", (16,)),
            ("dense_w", (784, 10)),
            ("dense_b", (10,)),
        ]
    )


def _patches(x: np.ndarray) -> np.ndarray:
    """3x3 same-pad patches of (N, H, W, C) as a (N*H*W, 9*C) matrix."""
    n, h, w, c = x.shape
    padded = np.zeros((n, h + 2, w + 2, c), dtype=np.float32)
    padded[:, 1:-1, 1:-1, :] = x
    s = padded.strides
    view = np.lib.stride_tricks.as_strided(
        padded, shape=(n, h, w, 3, 3, c), strides=(s[0], s[1], s[2], s[1], s[2], s[3])
    )
    return np.ascontiguousarray(view).reshape(n * h * w, 9 * c)


def conv2d_same(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """3x3 same-pad convolution: (N, H, W, Cin) with (3, 3, Cin, Cout)."""
    n, h, wd, c_in = x.shape
    c_out = w.shape[-1]
    cols = _patches(x)
    out = cols @ w.reshape(9 * c_in, c_out) + b
    return out.reshape(n, h, wd, c_out)


def maxpool2(x: np.ndarray) -> np.ndarray:
    """2x2 maxpool with stride 2, no padding."""
    n, h, w, c = x.shape
    return x.reshape(n, h // 2, 2, w // 2, 2, c).max(axis=(2, 4))


class ConvNetPolicy(PolicyNetwork):
    """Per-member ConvNet forward over flat 9098-parameter genomes.

    Observations may carry any extra batch axes between the population
    axis and the trailing 28x28 image; logits keep those axes and append
    the 10 class scores. Members are processed one at a time to bound
    memory, which also makes batched and looped execution trivially
    bit-identical.
    """

    def __init__(self):
        self.layout = convnet_layout()
        self.num_params = self.layout.total

    def _forward_cols(self, cols1: np.ndarray, n: int, blocks: dict[str, np.ndarray]) -> np.ndarray:
        x = cols1 @ blocks["conv1_w"].reshape(9, 8) + blocks["conv1_b"]
        x = np.maximum(x, np.float32(0.0)).reshape(n, 28, 28, 8)
        x = maxpool2(x)
        x = conv2d_same(x, blocks["conv2_w"], blocks["conv2_b"])
        x = np.maximum(x, np.float32(0.0))
        x = maxpool2(x)
        flat = x.reshape(n, 784)
        return flat @ blocks["dense_w"] + blocks["dense_b"]

    def get_actions(self, t_state: TaskState, params, p_state: PolicyState):
        params = self.layout.check(params)
        obs = t_state.obs
        p = params.shape[0]
        if obs.shape[0] != p:
            raise ValueError(f"obs population axis {obs.shape[0]} != params rows {p}")
        if obs.shape[-2:] != (28, 28):
            raise ValueError(f"expected trailing 28x28 images, got obs shape {obs.shape}")
        lead = obs.shape[1:-2]
        n = int(np.prod(lead)) if lead else 1
        logits = np.empty((p, n, 10), dtype=np.float32)
        # When the population axis is a broadcast view every member sees the
        # same images, so the first conv's input patches can be shared.
        shared_lanes = obs.strides[0] == 0
        all_blocks = self.layout.unflatten(params)
        cols1 = None
        for i in range(p):
            if cols1 is None or not shared_lanes:
                images = np.ascontiguousarray(obs[i], dtype=np.float32).reshape(n, 28, 28)
                cols1 = _patches(images[..., None])
            blocks = {k: v[i] for k, v in all_blocks.items()}
            logits[i] = self._forward_cols(cols1, n, blocks)
        return logits.reshape(p, *lead, 10), p_state
