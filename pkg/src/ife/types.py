"""Core tensor, score, and configuration types shared by all operations.

All arrays are row-major C x H x W, float32 canonical (float64 accepted at
I/O boundaries), immutable after construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonFiniteValue,
    TooSmall,
)

_FLOAT_DTYPES = (np.float32, np.float64)


class Padding(Enum):
    REPLICATE = "replicate"
    ZERO = "zero"


class ScoreMethod(Enum):
    CURVATURE = "curvature"
    ENTROPY = "entropy"


class DenominatorMode(Enum):
    """How the joint-histogram counts are normalized to probabilities.

    ALGORITHM_LITERAL divides by (H + ext_k) * (W + ext_k); the resulting
    "probabilities" do not sum to 1 but match the published procedure.
    EXACT_NORMALIZE divides by the true window count so they do.
    """

    ALGORITHM_LITERAL = "literal"
    EXACT_NORMALIZE = "exact"


def _as_readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


def _check_finite(flat: np.ndarray) -> None:
    finite = np.isfinite(flat)
    if not finite.all():
        raise NonFiniteValue(int(np.flatnonzero(~finite)[0]))


@dataclass(frozen=True)
class FeatureMap:
    """Dense C x H x W float tensor; validated, immutable, thread-safe."""

    values: np.ndarray  # shape (C, H, W), float32 or float64, read-only

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    @property
    def height(self) -> int:
        return self.values.shape[1]

    @property
    def width(self) -> int:
        return self.values.shape[2]

    @property
    def dtype(self) -> np.dtype:
        return self.values.dtype


@dataclass(frozen=True)
class Channel:
    """One H x W plane, the unit being scored.

    A Channel decoded from an image may be smaller than 3 x 3; operations
    that need a full 3 x 3 window raise TooSmall at call time.
    """

    values: np.ndarray  # shape (H, W), read-only

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


def feature_map_new(
    channels: int, height: int, width: int, values: Sequence[float] | np.ndarray
) -> FeatureMap:
    """Build a validated FeatureMap from a flat row-major value buffer."""
    if channels < 1 or height < 1 or width < 1:
        raise DimensionMismatch(
            f"dimensions must be positive, got {channels}x{height}x{width}"
        )
    if height < 3 or width < 3:
        raise TooSmall(f"H and W must be >= 3, got {height}x{width}")
    if isinstance(values, np.ndarray) and values.dtype in _FLOAT_DTYPES:
        arr = values
    else:
        arr = np.asarray(values, dtype=np.float32)
    flat = arr.reshape(-1)
    if flat.size != channels * height * width:
        raise DimensionMismatch(
            f"expected {channels * height * width} values, got {flat.size}"
        )
    _check_finite(flat)
    return FeatureMap(_as_readonly(flat.reshape(channels, height, width).copy()))


def feature_map_from_array(arr: np.ndarray) -> FeatureMap:
    """Validate a (C, H, W) or (H, W) ndarray into a FeatureMap."""
    if arr.ndim == 2:
        arr = arr[np.newaxis, :, :]
    if arr.ndim != 3:
        raise DimensionMismatch(f"expected rank 2 or 3, got rank {arr.ndim}")
    c, h, w = arr.shape
    return feature_map_new(c, h, w, arr)


def channel_view(fm: FeatureMap, c: int) -> Channel:
    """Read-only view of channel c; no copy."""
    if not 0 <= c < fm.channels:
        raise IndexOutOfRange(f"channel {c} out of range [0, {fm.channels})")
    return Channel(fm.values[c])


def channel_from_array(arr: np.ndarray) -> Channel:
    """Validate an (H, W) ndarray into a Channel (any positive size)."""
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected rank 2, got rank {arr.ndim}")
    if arr.dtype not in _FLOAT_DTYPES:
        arr = arr.astype(np.float32)
    _check_finite(arr.reshape(-1))
    return Channel(_as_readonly(arr.copy()))


@dataclass(frozen=True)
class CurvatureConfig:
    padding: Padding = Padding.REPLICATE

    def digest(self) -> str:
        return f"curvature;padding={self.padding.value}"


@dataclass(frozen=True)
class EntropyConfig:
    bins: int = 256
    kernel_size: int = 3
    denominator: DenominatorMode = DenominatorMode.ALGORITHM_LITERAL
    padding: Padding = field(default=Padding.REPLICATE)

    def __post_init__(self):
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")
        if self.kernel_size < 3 or self.kernel_size % 2 == 0:
            raise ValueError(
                f"kernel_size must be odd and >= 3, got {self.kernel_size}"
            )
        if self.padding is not Padding.REPLICATE:
            raise ValueError("entropy windows support replicate padding only")

    @property
    def ext_k(self) -> int:
        return self.kernel_size // 2

    def digest(self) -> str:
        return (
            f"entropy;bins={self.bins};kernel_size={self.kernel_size};"
            f"denominator={self.denominator.value};padding={self.padding.value}"
        )


@dataclass(frozen=True)
class SelectionConfig:
    """Proportion of channels to select; ties always break to the lower index."""

    ratio: float

    def __post_init__(self):
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError(f"ratio must be in [0, 1], got {self.ratio}")


@dataclass(frozen=True)
class ChannelScores:
    """Per-channel scalar scores plus the method and config that produced them."""

    method: ScoreMethod
    scores: np.ndarray  # shape (C,), float64, finite, >= 0
    config_digest: str

    def __post_init__(self):
        arr = np.asarray(self.scores, dtype=np.float64)
        if arr.ndim != 1:
            raise DimensionMismatch("scores must be one-dimensional")
        _check_finite(arr)
        if (arr < 0).any():
            raise ValueError("scores must be non-negative")
        object.__setattr__(self, "scores", _as_readonly(arr))

    def __len__(self) -> int:
        return int(self.scores.shape[0])
