"""Top-ratio channel selection and concatenation onto the raw feature map."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DuplicateIndex, IndexOutOfRange
from .types import (
    ChannelScores,
    CurvatureConfig,
    EntropyConfig,
    FeatureMap,
    ScoreMethod,
    SelectionConfig,
)
from .curvature import curvature_scores
from .entropy import entropy_scores


@dataclass(frozen=True)
class SelectionResult:
    """Selected channel indices plus the enhanced (C + k)-channel tensor."""

    selected: tuple[int, ...]  # descending score, ties to lower index
    ratio: float
    enhanced: FeatureMap
    scores: ChannelScores


def selection_count(ratio: float, channels: int) -> int:
    """k = ceil(r * C), except k = 0 when r = 0."""
    if ratio == 0.0:
        return 0
    return math.ceil(ratio * channels)


def select_top(scores: ChannelScores, cfg: SelectionConfig) -> list[int]:
    """Indices of the top-ceil(r*C) scores, descending, ties to lower index."""
    c = len(scores)
    k = selection_count(cfg.ratio, c)
    order = sorted(range(c), key=lambda i: (-scores.scores[i], i))
    return order[:k]


def rank_channels(scores: ChannelScores) -> list[int]:
    """rank[c] = position of channel c in the descending-score order."""
    order = sorted(range(len(scores)), key=lambda i: (-scores.scores[i], i))
    ranks = [0] * len(scores)
    for pos, idx in enumerate(order):
        ranks[idx] = pos
    return ranks


def enhance(fm: FeatureMap, selected: Sequence[int]) -> FeatureMap:
    """Concatenate copies of the selected channels after the raw channels."""
    seen = set()
    for idx in selected:
        if not 0 <= idx < fm.channels:
            raise IndexOutOfRange(f"channel {idx} out of range [0, {fm.channels})")
        if idx in seen:
            raise DuplicateIndex(f"channel {idx} selected twice")
        seen.add(idx)
    if not selected:
        return fm
    stacked = np.concatenate([fm.values, fm.values[list(selected)]], axis=0)
    out = np.ascontiguousarray(stacked)
    out.flags.writeable = False
    return FeatureMap(out)


def ife(
    fm: FeatureMap,
    method: ScoreMethod,
    ratio: float,
    config: CurvatureConfig | EntropyConfig | None = None,
    threads: int = 1,
) -> SelectionResult:
    """Score channels, select the top ratio, and concatenate them onto fm."""
    if method is ScoreMethod.CURVATURE:
        cfg = config if config is not None else CurvatureConfig()
        scores = curvature_scores(fm, cfg, threads=threads)
    elif method is ScoreMethod.ENTROPY:
        cfg = config if config is not None else EntropyConfig()
        scores = entropy_scores(fm, cfg, threads=threads)
    else:
        raise ValueError(f"unknown method {method!r}")
    selected = select_top(scores, SelectionConfig(ratio))
    return SelectionResult(
        selected=tuple(selected),
        ratio=ratio,
        enhanced=enhance(fm, selected),
        scores=scores,
    )
