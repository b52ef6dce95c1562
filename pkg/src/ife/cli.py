"""Command-line interface: score, enhance, sweep, selftest, bench.

Exit codes: 0 success, 1 internal invariant failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import os
import sys
import time

import numpy as np

from .errors import IfeError
from .types import (
    CurvatureConfig,
    DenominatorMode,
    EntropyConfig,
    FeatureMap,
    Padding,
    ScoreMethod,
    SelectionConfig,
    feature_map_from_array,
)
from .curvature import curvature_map, curvature_scores
from .entropy import entropy_scores
from .enhance import select_top, selection_count, ife
from .io import (
    build_score_report,
    fnv1a_64,
    read_array,
    read_png_gray,
    render_score_report,
    write_array,
    write_score_report,
)
from .oracle import naive_curvature, naive_entropy

DEFAULT_SWEEP_RATIOS = (0.50, 0.75, 1.0)


def _default_threads() -> int:
    env = os.environ.get("IFE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _add_method_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=["curvature", "entropy"], default="curvature")
    p.add_argument("--bins", type=int, default=None, help="entropy only (default 256)")
    p.add_argument(
        "--kernel-size", type=int, default=None, help="entropy only (default 3)"
    )
    p.add_argument(
        "--denominator",
        choices=["literal", "exact"],
        default=None,
        help="entropy only (default literal)",
    )
    p.add_argument(
        "--padding",
        choices=["replicate", "zero"],
        default=None,
        help="curvature only (default replicate)",
    )
    p.add_argument("--threads", type=int, default=_default_threads())


def _method_config(args, parser: argparse.ArgumentParser):
    if args.method == "curvature":
        for flag in ("bins", "kernel_size", "denominator"):
            if getattr(args, flag) is not None:
                parser.error(f"--{flag.replace('_', '-')} requires --method entropy")
        padding = Padding(args.padding) if args.padding else Padding.REPLICATE
        return ScoreMethod.CURVATURE, CurvatureConfig(padding=padding)
    if args.padding == "zero":
        parser.error("--padding zero is only valid with --method curvature")
    try:
        cfg = EntropyConfig(
            bins=args.bins if args.bins is not None else 256,
            kernel_size=args.kernel_size if args.kernel_size is not None else 3,
            denominator=DenominatorMode.ALGORITHM_LITERAL
            if args.denominator in (None, "literal")
            else DenominatorMode.EXACT_NORMALIZE,
        )
    except ValueError as e:
        parser.error(str(e))
    return ScoreMethod.ENTROPY, cfg


def _load_input(path: str) -> FeatureMap:
    if path.lower().endswith(".png"):
        ch = read_png_gray(path)
        return feature_map_from_array(ch.values)
    return read_array(path)


def _check_ratio(parser: argparse.ArgumentParser, ratio: float) -> None:
    if not 0.0 <= ratio <= 1.0:
        parser.error(f"--ratio must be in [0, 1], got {ratio}")


def _compute_scores(fm, method, cfg, threads):
    if method is ScoreMethod.CURVATURE:
        return curvature_scores(fm, cfg, threads=threads)
    return entropy_scores(fm, cfg, threads=threads)


def _cmd_score(args, parser) -> int:
    method, cfg = _method_config(args, parser)
    _check_ratio(parser, args.ratio)
    fm = _load_input(args.input)
    scores = _compute_scores(fm, method, cfg, args.threads)
    report = build_score_report(fm, scores, args.ratio)
    if args.verbose:
        for rec in report.channels:
            mark = "*" if rec.selected else " "
            print(f"channel {rec.index:4d}  score {rec.score:.9g}  rank {rec.rank}{mark}")
    if args.output:
        write_score_report(report, args.output, args.format)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(render_score_report(report, args.format))
    return 0


def _cmd_enhance(args, parser) -> int:
    method, cfg = _method_config(args, parser)
    _check_ratio(parser, args.ratio)
    fm = _load_input(args.input)
    result = ife(fm, method, args.ratio, cfg, threads=args.threads)
    write_array(result.enhanced, args.output)
    report = build_score_report(fm, result.scores, args.ratio)
    report_path = args.report or args.output + ".report.json"
    write_score_report(report, report_path, "json")
    print(f"{fm.channels} -> {result.enhanced.channels} channels")
    print(f"wrote {args.output} and {report_path}")
    return 0


def _cmd_sweep(args, parser) -> int:
    method, cfg = _method_config(args, parser)
    try:
        ratios = [float(r) for r in args.ratios.split(",") if r.strip() != ""]
    except ValueError:
        parser.error(f"malformed ratio list {args.ratios!r}")
    if not ratios:
        parser.error("ratio list is empty")
    for r in ratios:
        _check_ratio(parser, r)
    fm = _load_input(args.input)
    scores = _compute_scores(fm, method, cfg, args.threads)
    rows = []
    for r in ratios:
        selected = select_top(scores, SelectionConfig(r))
        digest = f"{fnv1a_64(','.join(map(str, sorted(selected))).encode()):016x}"
        if selected:
            sel_scores = [float(scores.scores[i]) for i in selected]
            lo, hi = min(sel_scores), max(sel_scores)
        else:
            lo = hi = float("nan")
        rows.append((r, len(selected), digest, lo, hi))
    header = ("ratio", "k", "selection_digest", "min_score", "max_score")
    print("{:>6} {:>6} {:>18} {:>14} {:>14}".format(*header))
    for r, k, digest, lo, hi in rows:
        print(f"{r:>6g} {k:>6d} {digest:>18} {lo:>14.6g} {hi:>14.6g}")
    if args.output:
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for r, k, digest, lo, hi in rows:
            writer.writerow([r, k, digest, repr(lo), repr(hi)])
        with open(args.output, "w", encoding="utf-8", newline="") as f:
            f.write(buf.getvalue())
        print(f"wrote {args.output}")
    return 0


def _random_map(rng: np.random.Generator) -> FeatureMap:
    c = int(rng.integers(1, 5))
    h = int(rng.integers(3, 25))
    w = int(rng.integers(3, 25))
    vals = rng.standard_normal((c, h, w)).astype(np.float32)
    return feature_map_from_array(vals)


def _cmd_selftest(args, parser) -> int:
    curvature_ok = 0
    entropy_ok = 0
    for trial in range(args.trials):
        seed = args.seed + trial
        rng = np.random.default_rng(seed)
        fm = _random_map(rng)
        shape = f"{fm.channels}x{fm.height}x{fm.width}"

        fail = None
        for c in range(fm.channels):
            from .types import channel_view

            ch = channel_view(fm, c)
            for padding in (Padding.REPLICATE, Padding.ZERO):
                ccfg = CurvatureConfig(padding=padding)
                fast = curvature_map(ch, ccfg).values
                slow = naive_curvature(ch, ccfg).values
                if np.max(np.abs(fast - slow)) > 1e-6:
                    fail = f"curvature mismatch, seed={seed}, shape={shape}, channel={c}"
        if fail:
            print(fail, file=sys.stderr)
            print(f"curvature: {curvature_ok}/{args.trials} ok before failure")
            return 1
        curvature_ok += 1

        for c in range(fm.channels):
            from .types import channel_view
            from .entropy import entropy_score, joint_histogram, quantize_channel, window_tuples

            ch = channel_view(fm, c)
            for mode in (DenominatorMode.ALGORITHM_LITERAL, DenominatorMode.EXACT_NORMALIZE):
                ecfg = EntropyConfig(denominator=mode)
                hist = joint_histogram(window_tuples(quantize_channel(ch, ecfg.bins), ecfg))
                e = entropy_score(ch, ecfg)
                ref_hist, ref_e = naive_entropy(ch, ecfg)
                if not np.array_equal(hist.counts, ref_hist.counts) or abs(e - ref_e) > 1e-9:
                    fail = f"entropy mismatch, seed={seed}, shape={shape}, channel={c}"
        if fail:
            print(fail, file=sys.stderr)
            print(f"entropy: {entropy_ok}/{args.trials} ok before failure")
            return 1
        entropy_ok += 1

    print(f"curvature: {curvature_ok}/{args.trials} ok, entropy: {entropy_ok}/{args.trials} ok")
    return 0


def _cmd_bench(args, parser) -> int:
    parts = args.shape.lower().split("x")
    if len(parts) != 3 or not all(p.isdigit() and int(p) > 0 for p in parts):
        parser.error(f"malformed shape {args.shape!r}, expected CxHxW like 64x224x224")
    c, h, w = (int(p) for p in parts)
    method, cfg = _method_config(args, parser)
    rng = np.random.default_rng(0)
    fm = feature_map_from_array(rng.standard_normal((c, h, w)).astype(np.float32))

    t0 = time.perf_counter()
    single = _compute_scores(fm, method, cfg, threads=1)
    elapsed = time.perf_counter() - t0
    mpix = c * h * w / 1e6
    print(
        f"{args.method} {c}x{h}x{w}: {elapsed:.3f} s single-threaded, "
        f"{c / elapsed:.1f} channels/s, {mpix / elapsed:.2f} Mpix/s"
    )
    threads = max(args.threads, 2)
    multi = _compute_scores(fm, method, cfg, threads=threads)
    same = np.array_equal(
        single.scores.view(np.uint64), multi.scores.view(np.uint64)
    )
    print(f"determinism 1 vs {threads} threads: {'ok' if same else 'MISMATCH'}")
    if not same:
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ife",
        description="Score, select, and enhance feature-map channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score a tensor or grayscale PNG")
    p_score.add_argument("input", help=".npy tensor or .png image")
    _add_method_flags(p_score)
    p_score.add_argument("--ratio", type=float, default=1.0)
    p_score.add_argument("-o", "--output", default=None)
    p_score.add_argument("--format", choices=["json", "csv"], default="json")
    p_score.add_argument("--verbose", action="store_true")
    p_score.set_defaults(func=_cmd_score)

    p_enh = sub.add_parser("enhance", help="write an enhanced tensor and report")
    p_enh.add_argument("input", help=".npy tensor")
    _add_method_flags(p_enh)
    p_enh.add_argument("--ratio", type=float, required=True)
    p_enh.add_argument("-o", "--output", required=True, help="output .npy path")
    p_enh.add_argument("--report", default=None, help="report path (default <output>.report.json)")
    p_enh.set_defaults(func=_cmd_enhance)

    p_sweep = sub.add_parser("sweep", help="selection table over a ratio grid")
    p_sweep.add_argument("input", help=".npy tensor")
    _add_method_flags(p_sweep)
    p_sweep.add_argument(
        "--ratios",
        default=",".join(str(r) for r in DEFAULT_SWEEP_RATIOS),
        help="comma-separated ratio list",
    )
    p_sweep.add_argument("-o", "--output", default=None, help="CSV output path")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_self = sub.add_parser("selftest", help="oracle-equivalence checks on random tensors")
    p_self.add_argument("--trials", type=int, default=25)
    p_self.add_argument("--seed", type=int, default=0)
    p_self.set_defaults(func=_cmd_selftest)

    p_bench = sub.add_parser("bench", help="timing and determinism report")
    p_bench.add_argument("shape", help="CxHxW, e.g. 64x224x224")
    _add_method_flags(p_bench)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (IfeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # invariant violation, not an input problem
        print(f"internal error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
