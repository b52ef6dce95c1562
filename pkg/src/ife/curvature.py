"""Approximate mean curvature of a channel via a fixed 3x3 convolution.

The kernel is [[a, b, a], [b, g, b], [a, b, a]] with a = -1/16, b = 5/16,
g = -1. It sums to zero and is 4-fold symmetric, so convolution equals
correlation and constants/affine ramps map to zero.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import TooSmall
from .types import (
    Channel,
    ChannelScores,
    CurvatureConfig,
    FeatureMap,
    Padding,
    ScoreMethod,
    channel_view,
)

ALPHA = -1.0 / 16.0
BETA = 5.0 / 16.0
GAMMA = -1.0

KERNEL = np.array(
    [
        [ALPHA, BETA, ALPHA],
        [BETA, GAMMA, BETA],
        [ALPHA, BETA, ALPHA],
    ],
    dtype=np.float64,
)


@dataclass(frozen=True)
class CurvatureMap:
    """Per-pixel curvature, same spatial size as the input channel."""

    values: np.ndarray  # shape (H, W), float64


def curvature_map(ch: Channel, cfg: CurvatureConfig = CurvatureConfig()) -> CurvatureMap:
    """Correlate the channel with the curvature kernel under cfg.padding."""
    h, w = ch.height, ch.width
    if h < 3 or w < 3:
        raise TooSmall(f"curvature needs H, W >= 3, got {h}x{w}")
    x = ch.values.astype(np.float64)
    if cfg.padding is Padding.REPLICATE:
        padded = np.pad(x, 1, mode="edge")
    else:
        padded = np.pad(x, 1, mode="constant", constant_values=0.0)
    out = np.zeros((h, w), dtype=np.float64)
    for dy in range(3):
        for dx in range(3):
            out += KERNEL[dy, dx] * padded[dy : dy + h, dx : dx + w]
    return CurvatureMap(out)


def curvature_score(ch: Channel, cfg: CurvatureConfig = CurvatureConfig()) -> float:
    """Mean absolute curvature over all H*W positions (>= 0)."""
    cm = curvature_map(ch, cfg)
    return float(np.abs(cm.values).mean())


def curvature_scores(
    fm: FeatureMap,
    cfg: CurvatureConfig = CurvatureConfig(),
    threads: int = 1,
) -> ChannelScores:
    """Score every channel; bitwise identical for any thread count."""
    chans = range(fm.channels)

    def one(c: int) -> float:
        try:
            return curvature_score(channel_view(fm, c), cfg)
        except TooSmall as e:
            raise TooSmall(f"channel {c}: {e}") from e

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scores = list(pool.map(one, chans))
    else:
        scores = [one(c) for c in chans]
    return ChannelScores(
        method=ScoreMethod.CURVATURE,
        scores=np.array(scores, dtype=np.float64),
        config_digest=cfg.digest(),
    )
