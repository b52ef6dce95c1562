"""Feature-channel scoring and enhancement.

Scores each channel of a C x H x W feature map by mean-curvature magnitude
or 2D joint-histogram entropy, selects the top proportion, and concatenates
the selected channels onto the raw tensor.
"""
from .errors import (
    BadMagic,
    ColumnMajorUnsupported,
    DecodeError,
    DimensionMismatch,
    DuplicateIndex,
    IfeError,
    IndexOutOfRange,
    NonFiniteValue,
    ShapeMismatch,
    TooSmall,
    UnsupportedColorType,
    UnsupportedDType,
    UnsupportedRank,
)
from .types import (
    Channel,
    ChannelScores,
    CurvatureConfig,
    DenominatorMode,
    EntropyConfig,
    FeatureMap,
    Padding,
    ScoreMethod,
    SelectionConfig,
    channel_from_array,
    channel_view,
    feature_map_from_array,
    feature_map_new,
)
from .curvature import KERNEL, CurvatureMap, curvature_map, curvature_score, curvature_scores
from .entropy import (
    JointHistogram,
    QuantizedChannel,
    WindowTuples,
    entropy_from_histogram,
    entropy_score,
    entropy_scores,
    joint_histogram,
    quantize_channel,
    window_tuples,
)
from .enhance import SelectionResult, enhance, ife, rank_channels, select_top, selection_count
from .io import (
    ScoreReport,
    build_score_report,
    read_array,
    read_png_gray,
    render_score_report,
    tensor_digest,
    write_array,
    write_score_report,
)
from . import oracle

__all__ = [
    "BadMagic", "ColumnMajorUnsupported", "DecodeError", "DimensionMismatch",
    "DuplicateIndex", "IfeError", "IndexOutOfRange", "NonFiniteValue",
    "ShapeMismatch", "TooSmall", "UnsupportedColorType", "UnsupportedDType",
    "UnsupportedRank",
    "Channel", "ChannelScores", "CurvatureConfig", "DenominatorMode",
    "EntropyConfig", "FeatureMap", "Padding", "ScoreMethod", "SelectionConfig",
    "channel_from_array", "channel_view", "feature_map_from_array", "feature_map_new",
    "KERNEL", "CurvatureMap", "curvature_map", "curvature_score", "curvature_scores",
    "JointHistogram", "QuantizedChannel", "WindowTuples", "entropy_from_histogram",
    "entropy_score", "entropy_scores", "joint_histogram", "quantize_channel",
    "window_tuples",
    "SelectionResult", "enhance", "ife", "rank_channels", "select_top",
    "selection_count",
    "ScoreReport", "build_score_report", "read_array", "read_png_gray",
    "render_score_report", "tensor_digest", "write_array", "write_score_report",
    "oracle",
]
