"""PPM image I/O and simple software-rendered task frames.

Frames are binary PPM (P6, maxval 255): bit-exact, dependency-free and
easy to diff in tests. Cart-pole and water world states are drawn with a
few rasterized primitives; the paint task's genome renders directly via
:func:`evokit.tasks.paint.render_triangles`.
"""

from __future__ import annotations

import numpy as np

from .core import FormatError
from .tasks.cartpole import CartPoleRecord, POLE_HALF_LEN
from .tasks.waterworld import WaterWorldRecord, AGENT_RADIUS, ITEM_RADIUS

__all__ = [
    "write_ppm",
    "read_ppm",
    "render_cartpole_frame",
    "render_waterworld_frame",
]


def write_ppm(path: str, image: np.ndarray) -> None:
    """Write an H x W x 3 image (float in [0, 1] or uint8) as binary PPM."""
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError(f"image must be H x W x 3, got {image.shape}")
    if image.dtype != np.uint8:
        image = (np.clip(image, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    h, w = image.shape[:2]
    with open(path, "wb") as f:
        f.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        f.write(image.tobytes())


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # skip whitespace and '#' comments
    while pos < len(data):
        c = data[pos : pos + 1]
        if c == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < len(data) and not data[pos : pos + 1].isspace():
        pos += 1
    if start == pos:
        raise FormatError("truncated PPM header")
    return data[start:pos], pos


def read_ppm(path: str) -> np.ndarray:
    """Read a binary PPM (P6, maxval 255) into a float32 H x W x 3 array."""
    with open(path, "rb") as f:
        data = f.read()
    magic, pos = _read_token(data, 0)
    if magic != b"P6":
        raise FormatError(f"bad PPM magic: {magic!r}")
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _read_token(data, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise FormatError(f"bad PPM {name}: {token!r}") from None
    w, h, maxval = fields
    if maxval != 255:
        raise FormatError(f"unsupported PPM maxval {maxval} (expected 255)")
    pos += 1  # single whitespace byte after maxval
    expected = h * w * 3
    pixels = data[pos : pos + expected]
    if len(pixels) != expected:
        raise FormatError(f"truncated PPM payload: expected {expected} bytes, got {len(pixels)}")
    img = np.frombuffer(pixels, dtype=np.uint8).reshape(h, w, 3)
    return img.astype(np.float32) / np.float32(255.0)


def _fill_circle(img: np.ndarray, cx: float, cy: float, radius: float, color) -> None:
    h, w = img.shape[:2]
    ys = np.arange(h, dtype=np.float32)[:, None]
    xs = np.arange(w, dtype=np.float32)[None, :]
    mask = (xs - cx) ** 2 + (ys - cy) ** 2 <= radius * radius
    img[mask] = color


def _fill_segment(img: np.ndarray, x0, y0, x1, y1, thickness: float, color) -> None:
    h, w = img.shape[:2]
    ys = np.arange(h, dtype=np.float32)[:, None]
    xs = np.arange(w, dtype=np.float32)[None, :]
    dx, dy = x1 - x0, y1 - y0
    seg_len2 = dx * dx + dy * dy
    if seg_len2 == 0.0:
        _fill_circle(img, x0, y0, thickness, color)
        return
    t = np.clip(((xs - x0) * dx + (ys - y0) * dy) / seg_len2, 0.0, 1.0)
    dist2 = (xs - (x0 + t * dx)) ** 2 + (ys - (y0 + t * dy)) ** 2
    img[dist2 <= thickness * thickness] = color


def render_cartpole_frame(
    record: CartPoleRecord, member: int = 0, lane: int = 0, width: int = 192, height: int = 120
) -> np.ndarray:
    """Draw one cart-pole lane: track, cart and pole on a white canvas."""
    img = np.ones((height, width, 3), dtype=np.float32)
    x = float(record.x[member, lane])
    theta = float(record.theta[member, lane])
    scale = width / 6.0  # world x in [-3, 3]
    ground_y = height * 0.75
    img[int(ground_y) : int(ground_y) + 2, :, :] = 0.6

    cart_x = (x + 3.0) * scale
    cart_w, cart_h = 0.4 * scale, 0.2 * scale
    x0 = int(np.clip(cart_x - cart_w / 2, 0, width - 1))
    x1 = int(np.clip(cart_x + cart_w / 2, 0, width - 1))
    y0 = int(np.clip(ground_y - cart_h, 0, height - 1))
    y1 = int(np.clip(ground_y, 0, height - 1))
    img[y0 : y1 + 1, x0 : x1 + 1] = (0.1, 0.1, 0.1)

    pole_len = 2.0 * POLE_HALF_LEN * scale
    top_x = cart_x + pole_len * np.sin(theta)
    top_y = (ground_y - cart_h) - pole_len * np.cos(theta)
    _fill_segment(img, cart_x, ground_y - cart_h, top_x, top_y, 2.0, (0.8, 0.2, 0.1))
    return img


def render_waterworld_frame(
    record: WaterWorldRecord,
    n_food: int,
    member: int = 0,
    lane: int = 0,
    multi_agent: bool = False,
    size: int = 240,
) -> np.ndarray:
    """Draw a water world arena: food green, poison red, agents blue."""
    img = np.ones((size, size, 3), dtype=np.float32)
    if multi_agent:
        items = record.item_pos[0, 0]
        agents = record.agent_pos[:, 0, :]
    else:
        items = record.item_pos[member, lane]
        agents = record.agent_pos[member : member + 1, lane, :]
    item_r = max(ITEM_RADIUS * size, 2.0)
    agent_r = max(AGENT_RADIUS * size, 3.0)
    for idx, (ix, iy) in enumerate(items):
        color = (0.15, 0.65, 0.2) if idx < n_food else (0.8, 0.15, 0.15)
        _fill_circle(img, ix * size, (1.0 - iy) * size, item_r, color)
    for ax, ay in agents:
        _fill_circle(img, ax * size, (1.0 - ay) * size, agent_r, (0.15, 0.3, 0.8))
    return img
