"""2D information entropy of a channel.

Pipeline: min-max quantize to [0, bins-1], slide a k x k window over the
replicate-padded grid, form (center, rounded neighbor mean) tuples, count
them in a bins x bins joint histogram, and sum -P * log2(P).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import TooSmall
from .types import (
    Channel,
    ChannelScores,
    DenominatorMode,
    EntropyConfig,
    FeatureMap,
    ScoreMethod,
    channel_view,
)


@dataclass(frozen=True)
class QuantizedChannel:
    """Integer levels in [0, bins-1], same shape as the source channel."""

    levels: np.ndarray  # shape (H, W), int64
    bins: int

    @property
    def height(self) -> int:
        return self.levels.shape[0]

    @property
    def width(self) -> int:
        return self.levels.shape[1]


@dataclass(frozen=True)
class WindowTuples:
    """(center level, neighbor-mean level) pairs, one per spatial position."""

    pairs: np.ndarray  # shape (H*W, 2), int64
    bins: int
    source_shape: tuple[int, int]  # (H, W)


@dataclass(frozen=True)
class JointHistogram:
    bins: int
    counts: np.ndarray  # shape (bins, bins), int64
    total_windows: int


def quantize_channel(ch: Channel, bins: int = 256) -> QuantizedChannel:
    """Min-max quantize to integer levels; a constant channel maps to 0."""
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    x = ch.values.astype(np.float64)
    lo = x.min()
    hi = x.max()
    if hi == lo:
        levels = np.zeros(x.shape, dtype=np.int64)
    else:
        levels = np.floor((bins - 1) * (x - lo) / (hi - lo) + 0.5).astype(np.int64)
        np.clip(levels, 0, bins - 1, out=levels)
    return QuantizedChannel(levels=levels, bins=bins)


def window_tuples(q: QuantizedChannel, cfg: EntropyConfig = EntropyConfig()) -> WindowTuples:
    """One (i, j) pair per position of the replicate-padded sliding window.

    i is the window's center level; j is the mean of the remaining
    kernel_size**2 - 1 levels, rounded half up.
    """
    k = cfg.kernel_size
    ext = cfg.ext_k
    h, w = q.height, q.width
    if h < k - ext or w < k - ext:
        raise TooSmall(f"window pass needs H, W >= {k - ext}, got {h}x{w}")
    padded = np.pad(q.levels, ext, mode="edge")
    windows = sliding_window_view(padded, (k, k))
    totals = windows.sum(axis=(-1, -2), dtype=np.int64)
    centers = q.levels
    neighbor_sums = (totals - centers).astype(np.float64)
    m = k * k - 1
    j = np.floor(neighbor_sums / m + 0.5).astype(np.int64)
    np.clip(j, 0, q.bins - 1, out=j)
    pairs = np.stack([centers.reshape(-1), j.reshape(-1)], axis=1)
    return WindowTuples(pairs=pairs, bins=q.bins, source_shape=(h, w))


def joint_histogram(t: WindowTuples, bins: int | None = None) -> JointHistogram:
    """Integer-exact bins x bins count grid over the (i, j) pairs."""
    b = t.bins if bins is None else bins
    flat = t.pairs[:, 0] * b + t.pairs[:, 1]
    counts = np.bincount(flat, minlength=b * b).reshape(b, b)
    return JointHistogram(bins=b, counts=counts, total_windows=int(t.pairs.shape[0]))


def entropy_from_histogram(
    h: JointHistogram,
    source_dims: tuple[int, int],
    cfg: EntropyConfig = EntropyConfig(),
) -> float:
    """Sum -(c/D) * log2(c/D) over nonzero cells; 0*log(0) contributes 0.

    D is (H + ext_k) * (W + ext_k) in ALGORITHM_LITERAL mode, or the true
    window count in EXACT_NORMALIZE mode.
    """
    height, width = source_dims
    if cfg.denominator is DenominatorMode.ALGORITHM_LITERAL:
        d = (height + cfg.ext_k) * (width + cfg.ext_k)
    else:
        d = h.total_windows
    nz = h.counts[h.counts > 0].astype(np.float64)
    p = nz / d
    return float(-(p * np.log2(p)).sum())


def entropy_score(ch: Channel, cfg: EntropyConfig = EntropyConfig()) -> float:
    """Full per-channel pipeline: quantize, window, histogram, entropy."""
    q = quantize_channel(ch, cfg.bins)
    t = window_tuples(q, cfg)
    hist = joint_histogram(t)
    return entropy_from_histogram(hist, (ch.height, ch.width), cfg)


def entropy_scores(
    fm: FeatureMap,
    cfg: EntropyConfig = EntropyConfig(),
    threads: int = 1,
) -> ChannelScores:
    """Score every channel; deterministic under any thread count."""
    chans = range(fm.channels)

    def one(c: int) -> float:
        try:
            return entropy_score(channel_view(fm, c), cfg)
        except TooSmall as e:
            raise TooSmall(f"channel {c}: {e}") from e

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scores = list(pool.map(one, chans))
    else:
        scores = [one(c) for c in chans]
    return ChannelScores(
        method=ScoreMethod.ENTROPY,
        scores=np.array(scores, dtype=np.float64),
        config_digest=cfg.digest(),
    )
