"""Grayscale PGM rendering of labeling-distribution matrices.

Row r of the image is labeling index r (index 0 at the top); column i is
dataset column i.  Intensity maps probability relative to the global matrix
maximum, either linearly or on a log axis spanning [log epsilon, log max].
No plotting stack involved — the writer emits binary P5 directly, plus a
JSON sidecar recording the render parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ldm import DEFAULT_EPSILON, LDMatrix


@dataclass(frozen=True)
class HeatmapConfig:
    scale: str = "linear"
    gamma: float = 1.0
    invert: bool = False

    def __post_init__(self):
        if self.scale not in ("linear", "log"):
            raise ValueError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


def _intensities(matrix: np.ndarray, config: HeatmapConfig) -> np.ndarray:
    global_max = float(matrix.max())
    if config.scale == "linear":
        v = matrix / global_max if global_max > 0.0 else np.zeros_like(matrix)
    else:
        log_lo = np.log(DEFAULT_EPSILON)
        log_hi = np.log(global_max) if global_max > 0.0 else log_lo
        if log_hi <= log_lo:  # every entry at or below the smoothing floor
            v = np.ones_like(matrix)
        else:
            clipped = np.maximum(matrix, DEFAULT_EPSILON)
            v = (np.log(clipped) - log_lo) / (log_hi - log_lo)
    return np.clip(v, 0.0, 1.0)


def render_pgm(ldm: LDMatrix, path: str | Path, config: HeatmapConfig = HeatmapConfig()) -> None:
    """Write the matrix as a binary PGM (maxval 255) plus a ``.json`` sidecar."""
    path = Path(path)
    matrix = ldm.matrix
    v = _intensities(matrix, config)
    pixels = np.rint(255.0 * v**config.gamma).astype(np.uint8)
    if config.invert:
        pixels = 255 - pixels
    height, width = pixels.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    path.write_bytes(header + pixels.tobytes())

    sidecar = {
        "num_classes": ldm.num_classes,
        "holdout_size": ldm.holdout_size,
        "k_columns": ldm.k_columns,
        "scale": config.scale,
        "gamma": config.gamma,
        "invert": config.invert,
        "global_max": float(matrix.max()),
    }
    Path(str(path) + ".json").write_text(json.dumps(sidecar, indent=2) + "\n")
