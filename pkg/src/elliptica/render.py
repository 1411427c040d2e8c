"""Domain colouring of wallpaper functions and binary PPM output.

Hue is the argument of the value, lightness ``(2/pi) atan|v|`` (so zeros are
black and poles white), saturation 1.
"""
from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RenderConfig

ROW_CHUNK = 64


@dataclass(frozen=True)
class Image:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8, row 0 at the top

    def __post_init__(self):
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(f"pixel array shape {self.pixels.shape} does not match "
                             f"{self.width}x{self.height}")

    def to_ppm(self) -> bytes:
        return f"P6\n{self.width} {self.height}\n255\n".encode() + self.pixels.tobytes()


def domain_color(v) -> tuple[int, int, int]:
    """RGB bytes for one value; ``inf``/``nan`` counts as a pole."""
    v = complex(v)
    if not (math.isfinite(v.real) and math.isfinite(v.imag)):
        return (255, 255, 255)
    h = (math.atan2(v.imag, v.real) / (2 * math.pi)) % 1.0
    l = 2 / math.pi * math.atan(abs(v))
    r, g, b = colorsys.hls_to_rgb(h, l, 1.0)
    return tuple(min(255, max(0, round(255 * x))) for x in (r, g, b))


def domain_color_array(v: np.ndarray) -> np.ndarray:
    """Vectorised :func:`domain_color`; returns ``v.shape + (3,)`` uint8."""
    v = np.asarray(v, dtype=complex)
    pole = ~np.isfinite(v)
    vv = np.where(pole, 0, v)
    h = np.mod(np.arctan2(vv.imag, vv.real) / (2 * np.pi), 1.0)
    l = 2 / np.pi * np.arctan(np.abs(vv))
    # HSL -> RGB with S = 1
    q = np.where(l < 0.5, 2 * l, 1.0)
    p = 2 * l - q
    rgb = []
    for t in (h + 1 / 3, h, h - 1 / 3):
        t = np.mod(t, 1.0)
        c = np.where(t < 1 / 6, p + (q - p) * 6 * t,
            np.where(t < 1 / 2, q,
            np.where(t < 2 / 3, p + (q - p) * (2 / 3 - t) * 6, p)))
        rgb.append(c)
    out = np.clip(np.round(255 * np.stack(rgb, axis=-1)), 0, 255).astype(np.uint8)
    out[pole] = 255
    return out


def pixel_grid(viewport, width: int, height: int, supersample: int = 1) -> np.ndarray:
    """Complex sample points, shape ``(height, width, s*s)``.

    Sub-pixel centres are spread evenly inside each pixel; with
    ``supersample=1`` this is the pixel centre.  Row 0 is the top edge.
    """
    lo, hi = viewport
    s = supersample
    off = (np.arange(s) + 0.5) / s
    cols = (np.arange(width)[:, None] + off[None, :]) / width          # (W, s)
    rows = (np.arange(height)[:, None] + off[None, :]) / height        # (H, s)
    x = lo.real + cols * (hi.real - lo.real)
    y = hi.imag - rows * (hi.imag - lo.imag)
    z = x[None, :, None, :] + 1j * y[:, None, :, None]                # (H, W, s, s)
    return z.reshape(height, width, s * s)


def sample_values(f, grid: np.ndarray) -> np.ndarray:
    """Average of ``f`` over the last axis; any non-finite sub-sample makes the pixel a pole."""
    out = np.empty(grid.shape[:2], dtype=complex)
    for r0 in range(0, grid.shape[0], ROW_CHUNK):
        block = grid[r0:r0 + ROW_CHUNK]
        vals = np.asarray(f(block.ravel())).reshape(block.shape)
        with np.errstate(invalid="ignore", over="ignore"):
            avg = vals.mean(axis=-1)
        avg[~np.all(np.isfinite(vals), axis=-1)] = np.inf
        out[r0:r0 + ROW_CHUNK] = avg
    return out


def render_function(f, viewport, width: int, height: int, supersample: int = 1,
                    transform=None) -> Image:
    """Render ``f`` over ``viewport``; ``transform`` is applied to the sample points first."""
    grid = pixel_grid(viewport, width, height, supersample)
    if transform is not None:
        grid = transform(grid)
    return Image(width, height, domain_color_array(sample_values(f, grid)))


def render(config: RenderConfig, transform=None) -> Image:
    return render_function(config.build(), config.viewport, config.width, config.height,
                           config.supersample, transform)


def write_ppm(path, image: Image) -> None:
    Path(path).write_bytes(image.to_ppm())


def read_ppm(path) -> Image:
    data = Path(path).read_bytes()
    fields, pos = [], 0
    while len(fields) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        start = pos
        while not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    if fields[0] != b"P6" or int(fields[3]) != 255:
        raise ValueError(f"{path}: not a binary 8-bit PPM")
    w, h = int(fields[1]), int(fields[2])
    pix = np.frombuffer(data[pos + 1:pos + 1 + 3 * w * h], dtype=np.uint8)
    return Image(w, h, pix.reshape(h, w, 3).copy())
