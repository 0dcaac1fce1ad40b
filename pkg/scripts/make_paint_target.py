#!/usr/bin/env python3
"""Generate a sample 64x64 target image for the paint task."""

import sys

import numpy as np

from evokit.render import write_ppm


def make_target(size: int = 64) -> np.ndarray:
    ys, xs = np.mgrid[0:size, 0:size].astype(np.float32) / (size - 1)
    img = np.stack([xs, 0.3 + 0.4 * ys, 1.0 - xs], axis=-1)
    disc = (xs - 0.35) ** 2 + (ys - 0.4) ** 2 <= 0.05
    img[disc] = (0.95, 0.9, 0.2)
    return np.clip(img, 0.0, 1.0).astype(np.float32)


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "target.ppm"
    size = int(sys.argv[2]) if len(sys.argv) > 2 else 64
    write_ppm(out, make_target(size))
    print(f"wrote {size}x{size} target to {out}")
