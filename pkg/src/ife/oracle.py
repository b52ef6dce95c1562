"""Brute-force reference implementations used to validate the fast paths.

Everything here is deliberately slow and literal: explicit per-pixel and
per-tap loops, no vectorization, no shared helpers with the optimized
modules beyond the core types. Agreement between the two paths is the
evidence the self-test and acceptance suites rely on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch, TooSmall
from .curvature import CurvatureMap
from .entropy import JointHistogram
from .types import Channel, CurvatureConfig, DenominatorMode, EntropyConfig, Padding

# Literal kernel table; kept separate from curvature.KERNEL on purpose.
_KERNEL_TABLE = (
    (-1.0 / 16.0, 5.0 / 16.0, -1.0 / 16.0),
    (5.0 / 16.0, -1.0, 5.0 / 16.0),
    (-1.0 / 16.0, 5.0 / 16.0, -1.0 / 16.0),
)


def naive_curvature(ch: Channel, cfg: CurvatureConfig = CurvatureConfig()) -> CurvatureMap:
    """Quadruple-loop evaluation of the curvature correlation."""
    h, w = ch.height, ch.width
    if h < 3 or w < 3:
        raise TooSmall(f"curvature needs H, W >= 3, got {h}x{w}")
    x = ch.values
    out = np.zeros((h, w), dtype=np.float64)
    for y in range(h):
        for xx in range(w):
            acc = 0.0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    yy = y + dy
                    xc = xx + dx
                    if cfg.padding is Padding.REPLICATE:
                        yy = min(max(yy, 0), h - 1)
                        xc = min(max(xc, 0), w - 1)
                        v = float(x[yy, xc])
                    else:
                        if 0 <= yy < h and 0 <= xc < w:
                            v = float(x[yy, xc])
                        else:
                            v = 0.0
                    acc += _KERNEL_TABLE[dy + 1][dx + 1] * v
            out[y, xx] = acc
    return CurvatureMap(out)


def naive_curvature_score(ch: Channel, cfg: CurvatureConfig = CurvatureConfig()) -> float:
    """Sequential row-major mean of absolute curvature."""
    cm = naive_curvature(ch, cfg)
    total = 0.0
    for y in range(ch.height):
        for x in range(ch.width):
            total += abs(cm.values[y, x])
    return total / (ch.height * ch.width)


def naive_entropy(
    ch: Channel, cfg: EntropyConfig = EntropyConfig()
) -> tuple[JointHistogram, float]:
    """Literal quantize / window / histogram / entropy pass with loops."""
    h, w = ch.height, ch.width
    k = cfg.kernel_size
    ext = cfg.ext_k
    bins = cfg.bins
    if h < k - ext or w < k - ext:
        raise TooSmall(f"window pass needs H, W >= {k - ext}, got {h}x{w}")

    vals = [[float(ch.values[y, x]) for x in range(w)] for y in range(h)]
    lo = vals[0][0]
    hi = vals[0][0]
    for row in vals:
        for v in row:
            if v < lo:
                lo = v
            if v > hi:
                hi = v
    levels = [[0] * w for _ in range(h)]
    if hi != lo:
        for y in range(h):
            for x in range(w):
                lvl = math.floor((bins - 1) * (vals[y][x] - lo) / (hi - lo) + 0.5)
                if lvl < 0:
                    lvl = 0
                if lvl > bins - 1:
                    lvl = bins - 1
                levels[y][x] = lvl

    tallies: dict[tuple[int, int], int] = {}
    m = k * k - 1
    for y in range(h):
        for x in range(w):
            s = 0
            for dy in range(-ext, ext + 1):
                for dx in range(-ext, ext + 1):
                    yy = min(max(y + dy, 0), h - 1)
                    xc = min(max(x + dx, 0), w - 1)
                    s += levels[yy][xc]
            i = levels[y][x]
            s -= i
            j = math.floor(s / m + 0.5)
            if j > bins - 1:
                j = bins - 1
            tallies[(i, j)] = tallies.get((i, j), 0) + 1

    counts = np.zeros((bins, bins), dtype=np.int64)
    for (i, j), c in tallies.items():
        counts[i, j] = c

    if cfg.denominator is DenominatorMode.ALGORITHM_LITERAL:
        d = (h + ext) * (w + ext)
    else:
        d = h * w
    entropy = 0.0
    for (i, j) in sorted(tallies):
        p = tallies[(i, j)] / d
        entropy += -p * math.log2(p)
    hist = JointHistogram(bins=bins, counts=counts, total_windows=h * w)
    return hist, entropy


@dataclass(frozen=True)
class CompareReport:
    max_abs_diff: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_abs_diff <= self.tol


def compare_maps(a: np.ndarray, b: np.ndarray, tol: float) -> CompareReport:
    """Max-abs-difference report; passes iff the difference is within tol."""
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    diff = float(np.max(np.abs(a.astype(np.float64) - b.astype(np.float64))))
    return CompareReport(max_abs_diff=diff, tol=tol)
