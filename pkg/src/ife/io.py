"""Bit-exact interchange: .npy arrays, grayscale PNG ingestion, score reports.

Accepted array files are .npy format version 1.0, little-endian f32/f64,
C-order, rank 2 (treated as C=1) or rank 3. Everything else is a typed
error, never a silent conversion.
"""
from __future__ import annotations

import ast
import csv
import io as _io
import json
import struct
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    BadMagic,
    ColumnMajorUnsupported,
    DecodeError,
    DimensionMismatch,
    UnsupportedColorType,
    UnsupportedDType,
    UnsupportedRank,
)
from .types import Channel, FeatureMap, channel_from_array, feature_map_new

_MAGIC = b"\x93NUMPY"
_DTYPES = {"<f4": np.dtype("<f4"), "<f8": np.dtype("<f8")}

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a over a byte string."""
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _U64
    return h


def tensor_digest(fm: FeatureMap) -> str:
    """Hex FNV-1a digest of the raw little-endian payload bytes."""
    payload = np.ascontiguousarray(fm.values.astype(fm.dtype.newbyteorder("<")))
    return f"{fnv1a_64(payload.tobytes()):016x}"


def read_array(path: str, narrow_f64: bool = False) -> FeatureMap:
    """Read an .npy file into a validated FeatureMap.

    f64 payloads are kept at 64-bit unless narrow_f64 is set.
    """
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < 10 or raw[:6] != _MAGIC:
        raise BadMagic(f"{path}: not an npy file")
    major, minor = raw[6], raw[7]
    if (major, minor) != (1, 0):
        raise BadMagic(f"{path}: unsupported npy version {major}.{minor}")
    (hlen,) = struct.unpack("<H", raw[8:10])
    header_end = 10 + hlen
    try:
        header = ast.literal_eval(raw[10:header_end].decode("latin1"))
    except (ValueError, SyntaxError) as e:
        raise BadMagic(f"{path}: malformed npy header") from e
    descr = header.get("descr")
    if descr not in _DTYPES:
        raise UnsupportedDType(f"{path}: dtype {descr!r} not in {sorted(_DTYPES)}")
    if header.get("fortran_order"):
        raise ColumnMajorUnsupported(f"{path}: column-major arrays are not supported")
    shape = header.get("shape")
    if not isinstance(shape, tuple) or len(shape) not in (2, 3):
        rank = len(shape) if isinstance(shape, tuple) else "?"
        raise UnsupportedRank(f"{path}: rank {rank}, expected 2 or 3")
    dtype = _DTYPES[descr]
    count = int(np.prod(shape))
    payload = raw[header_end:]
    if len(payload) != count * dtype.itemsize:
        raise DimensionMismatch(
            f"{path}: payload is {len(payload)} bytes, expected {count * dtype.itemsize}"
        )
    arr = np.frombuffer(payload, dtype=dtype).reshape(shape)
    arr = arr.astype(arr.dtype.newbyteorder("="))
    if arr.dtype == np.float64 and narrow_f64:
        arr = arr.astype(np.float32)
    if arr.ndim == 2:
        arr = arr[np.newaxis, :, :]
    c, h, w = arr.shape
    return feature_map_new(c, h, w, arr)


def write_array(fm: FeatureMap, path: str) -> None:
    """Write an .npy v1.0 file; byte-deterministic for identical maps."""
    descr = "<f4" if fm.dtype == np.float32 else "<f8"
    shape = tuple(int(s) for s in fm.values.shape)
    header = "{'descr': '%s', 'fortran_order': False, 'shape': %s, }" % (descr, shape)
    # Pad with spaces so magic+version+len+header+newline is a multiple of 64.
    unpadded = len(_MAGIC) + 2 + 2 + len(header) + 1
    header = header + " " * (-unpadded % 64) + "\n"
    payload = np.ascontiguousarray(fm.values.astype(fm.dtype.newbyteorder("<")))
    try:
        with open(path, "wb") as f:
            f.write(_MAGIC)
            f.write(bytes([1, 0]))
            f.write(struct.pack("<H", len(header)))
            f.write(header.encode("latin1"))
            f.write(payload.tobytes())
    except OSError as e:
        raise OSError(f"cannot write array file {path}: {e}") from e


def read_png_gray(path: str) -> Channel:
    """Decode an 8/16-bit grayscale or 8-bit RGB PNG to a float channel.

    Gray samples are scaled to [0, 1]; RGB is converted by luma
    0.299 R + 0.587 G + 0.114 B before scaling.
    """
    try:
        img = Image.open(path)
        img.load()
    except (UnidentifiedImageError, OSError) as e:
        raise DecodeError(f"{path}: {e}") from e
    if (img.format or "").upper() != "PNG":
        raise DecodeError(f"{path}: not a PNG file (format {img.format!r})")
    mode = img.mode
    if mode == "L":
        arr = np.asarray(img, dtype=np.float64) / 255.0
    elif mode in ("I;16", "I"):
        arr = np.asarray(img, dtype=np.float64) / 65535.0
    elif mode == "RGB":
        rgb = np.asarray(img, dtype=np.float64)
        arr = (0.299 * rgb[:, :, 0] + 0.587 * rgb[:, :, 1] + 0.114 * rgb[:, :, 2]) / 255.0
    else:
        raise UnsupportedColorType(f"{path}: PNG mode {mode!r} is not supported")
    return channel_from_array(arr.astype(np.float32))


@dataclass(frozen=True)
class ChannelRecord:
    index: int
    score: float
    rank: int
    selected: bool


@dataclass(frozen=True)
class ScoreReport:
    """Self-describing per-channel score/selection record for one tensor."""

    method: str
    ratio: float
    padding: str
    input_digest: str
    channels: tuple[ChannelRecord, ...]
    bins: int | None = None
    kernel_size: int | None = None
    denominator: str | None = None

    def to_dict(self) -> dict:
        out: dict = {"method": self.method, "ratio": self.ratio}
        if self.bins is not None:
            out["bins"] = self.bins
        if self.kernel_size is not None:
            out["kernel_size"] = self.kernel_size
        if self.denominator is not None:
            out["denominator"] = self.denominator
        out["padding"] = self.padding
        out["input_digest"] = self.input_digest
        out["channels"] = [
            {"index": r.index, "score": r.score, "rank": r.rank, "selected": r.selected}
            for r in self.channels
        ]
        return out


def build_score_report(fm: FeatureMap, scores, ratio: float) -> ScoreReport:
    """Assemble the report for one tensor from its scores and a ratio."""
    from .enhance import rank_channels, selection_count
    from .types import ScoreMethod

    ranks = rank_channels(scores)
    k = selection_count(ratio, len(scores))
    records = tuple(
        ChannelRecord(
            index=c,
            score=float(scores.scores[c]),
            rank=ranks[c],
            selected=ranks[c] < k,
        )
        for c in range(len(scores))
    )
    cfg_fields = dict(
        part.split("=", 1) for part in scores.config_digest.split(";")[1:]
    )
    if scores.method is ScoreMethod.ENTROPY:
        return ScoreReport(
            method="entropy",
            ratio=ratio,
            padding=cfg_fields["padding"],
            input_digest=tensor_digest(fm),
            channels=records,
            bins=int(cfg_fields["bins"]),
            kernel_size=int(cfg_fields["kernel_size"]),
            denominator=cfg_fields["denominator"],
        )
    return ScoreReport(
        method="curvature",
        ratio=ratio,
        padding=cfg_fields["padding"],
        input_digest=tensor_digest(fm),
        channels=records,
    )


def render_score_report(report: ScoreReport, fmt: str = "json") -> str:
    """Deterministic JSON or CSV serialization of a report."""
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2) + "\n"
    if fmt == "csv":
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "score", "rank", "selected"])
        for r in report.channels:
            writer.writerow([r.index, repr(r.score), r.rank, str(r.selected).lower()])
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def write_score_report(report: ScoreReport, path: str, fmt: str = "json") -> None:
    text = render_score_report(report, fmt)
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise OSError(f"cannot write report {path}: {e}") from e
