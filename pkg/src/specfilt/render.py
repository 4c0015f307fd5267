"""Domain-coloring images and CSV dumps of reconstructed signals."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .basis import BasisSpec, reconstruct
from .filters import FilterDesign


def hls_to_rgb(h, l, s):
    """Vectorized hexcone HLS -> RGB; all channels in [0, 1]."""
    h = np.asarray(h, dtype=float) % 1.0
    l = np.asarray(l, dtype=float)
    s = np.broadcast_to(np.asarray(s, dtype=float), l.shape)
    m2 = np.where(l <= 0.5, l * (1.0 + s), l + s - l * s)
    m1 = 2.0 * l - m2

    def channel(hue):
        hue = hue % 1.0
        return np.select(
            [hue < 1 / 6, hue < 0.5, hue < 2 / 3],
            [m1 + (m2 - m1) * hue * 6.0, m2, m1 + (m2 - m1) * (2 / 3 - hue) * 6.0],
            default=m1,
        )

    rgb = np.stack([channel(h + 1 / 3), channel(h), channel(h - 1 / 3)], axis=-1)
    return np.where((s == 0)[..., None], l[..., None], rgb)


def complex_grid(region: Sequence[float], px: tuple[int, int]) -> np.ndarray:
    """Pixel-center coordinates; row 0 is the largest imaginary part."""
    re_min, re_max, im_min, im_max = region
    width, height = px
    if width < 16 or height < 16:
        raise ValueError(f"resolution must be at least 16x16, got {width}x{height}")
    x = re_min + (np.arange(width) + 0.5) * (re_max - re_min) / width
    y = im_max - (np.arange(height) + 0.5) * (im_max - im_min) / height
    return x[None, :] + 1j * y[:, None]


def hue_lightness(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hue in [0, 1) linear in arg over (-pi, pi]; lightness in [0, 1) linear in arctan|f|."""
    hue = ((np.angle(values) + math.pi) / (2 * math.pi)) % 1.0
    light = np.arctan(np.abs(values)) / (math.pi / 2)
    return hue, light


def color_function(f: Callable, region=(-2.0, 2.0, -2.0, 2.0), px=(400, 400)):
    """(hue, lightness, rgb uint8) for the complex function ``f`` over ``region``."""
    z = complex_grid(region, px)
    values = np.broadcast_to(np.asarray(f(z), dtype=complex), z.shape)
    hue, light = hue_lightness(values)
    rgb = hls_to_rgb(hue, light, 1.0)
    return hue, light, np.round(rgb * 255).astype(np.uint8)


def domain_coloring(design: FilterDesign, region=(-2.0, 2.0, -2.0, 2.0), px=(400, 400)) -> np.ndarray:
    """RGB image of the design's characteristic polynomial (prototype denominator)."""
    return color_function(design.characteristic, region, px)[2]


def write_ppm(path, rgb: np.ndarray) -> None:
    """Binary 8-bit portable pixmap."""
    rgb = np.ascontiguousarray(rgb, dtype=np.uint8)
    height, width, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(f"P6\n{width} {height}\n255\n".encode("ascii"))
        fh.write(rgb.tobytes())


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    width, height = int(parts[1]), int(parts[2])
    return np.frombuffer(parts[4], dtype=np.uint8).reshape(height, width, 3)


def emit_signal_csv(pairs, grid, path, T: float | None = None) -> None:
    """Reconstruct each (label, SpectralVec) on ``grid`` and write columns t, label..."""
    grid = np.asarray(grid, dtype=float)
    columns = []
    for label, vec in pairs:
        spec = BasisSpec(vec.T if T is None else T, vec.L)
        columns.append((label, reconstruct(spec, vec.coeffs, grid)))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [label for label, _ in columns])
        for k, t in enumerate(grid):
            writer.writerow([f"{t:.9g}"] + [f"{col[k]:.9g}" for _, col in columns])
