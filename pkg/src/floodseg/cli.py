"""Command-line front end: run the pipeline, dump stages, report, benchmark.

Exit codes: 0 success, 1 malformed arguments, 2 I/O or parse failure,
3 degenerate pipeline input. Every error path prints a single
machine-parseable line to stderr prefixed ``error:``.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
from pathlib import Path

from .morphology import parse_structuring_element
from .pipeline import (
    Mode,
    PipelineConfig,
    PipelineDegenerate,
    PipelineResult,
    label_agreement,
    run_pipeline,
)
from .raster import RasterError, read_image, write_image
from .watershed import colorize_labels


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="floodseg",
        description="Segment an image by thresholding, gradient masking, "
        "dilation, and the watershed transform.",
    )
    parser.add_argument("--input", required=True, help="input PGM/PPM image")
    parser.add_argument(
        "--mode",
        choices=["threshold", "no-threshold", "both"],
        default="both",
        help="which pipeline variant(s) to run (default: both)",
    )
    parser.add_argument("--out-dir", default="./out", help="stage dump directory")
    parser.add_argument("--connectivity", type=int, choices=[4, 8], default=4)
    parser.add_argument(
        "--se",
        default="square3",
        help="structuring element: square3 or offsets:(dx,dy);(dx,dy);...",
    )
    parser.add_argument("--fudge", type=float, default=1.0, help="BGM threshold scale")
    parser.add_argument(
        "--fixed-t", type=int, default=127, help="fixed binarization threshold"
    )
    parser.add_argument("--dump-stages", action="store_true", help="write stage images")
    parser.add_argument("--report-json", default=None, help="write a JSON report here")
    parser.add_argument(
        "--bench", type=int, default=None, help="time this many pipeline runs"
    )
    parser.add_argument("--color-seed", type=int, default=1)
    return parser


def _dump_stages(result: PipelineResult, out_dir: Path, color_seed: int) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_image(result.s0_gray, out_dir / "s0_gray.pgm")
    write_image(result.s1_binary, out_dir / "s1_binary.pgm")
    write_image(result.s2_bgm, out_dir / "s2_bgm.pgm")
    write_image(result.s3_gradmag, out_dir / "s3_gradmag.pgm")
    write_image(result.s4_dilated, out_dir / "s4_dilated.pgm")
    write_image(colorize_labels(result.s5_labels, color_seed), out_dir / "s5_labels.ppm")


def _run_report(mode: Mode, result: PipelineResult, bench_ms: list[float] | None) -> dict:
    report = {
        "mode": mode.value,
        "threshold": (
            result.threshold_report.threshold if result.threshold_report else None
        ),
        "criterion_value": (
            result.threshold_report.criterion_value if result.threshold_report else None
        ),
        "bgm_threshold": result.bgm_report.threshold,
        "basin_count": result.s5_labels.basin_count,
        "watershed_pixels": result.s5_labels.watershed_pixel_count,
        "stage_ms": [t * 1000.0 for t in result.stage_seconds],
        "total_ms": result.total_seconds * 1000.0,
    }
    if bench_ms is not None:
        report["bench_ms"] = bench_ms
        report["bench_stats_ms"] = {
            "min": min(bench_ms),
            "median": statistics.median(bench_ms),
            "mean": statistics.fmean(bench_ms),
        }
    return report


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.bench is not None and args.bench < 1:
        print("error: --bench must be >= 1", file=sys.stderr)
        return 1
    if args.fudge <= 0:
        print("error: --fudge must be positive", file=sys.stderr)
        return 1
    if not 0 <= args.fixed_t <= 255:
        print("error: --fixed-t must be in 0..255", file=sys.stderr)
        return 1
    try:
        se = parse_structuring_element(args.se)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        img = read_image(args.input)
    except (OSError, RasterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    modes = {
        "threshold": [Mode.WITH_THRESHOLD],
        "no-threshold": [Mode.WITHOUT_THRESHOLD],
        "both": [Mode.WITH_THRESHOLD, Mode.WITHOUT_THRESHOLD],
    }[args.mode]

    n_runs = args.bench if args.bench is not None else 1
    results: dict[Mode, PipelineResult] = {}
    samples: dict[Mode, list[float]] = {}
    for mode in modes:
        cfg = PipelineConfig(
            mode=mode,
            connectivity=args.connectivity,
            se=se,
            fudge=args.fudge,
            fixed_binarize_t=args.fixed_t,
            color_seed=args.color_seed,
        )
        try:
            for _ in range(n_runs):
                result = run_pipeline(img, cfg)
                samples.setdefault(mode, []).append(result.total_seconds * 1000.0)
            results[mode] = result
        except PipelineDegenerate as exc:
            print(
                f"error: pipeline degenerate at stage {exc.stage}"
                f" (mode {mode.value}): {exc.reason}",
                file=sys.stderr,
            )
            return 3

    out_dir = Path(args.out_dir)
    if args.dump_stages:
        try:
            for mode in modes:
                _dump_stages(results[mode], out_dir / mode.value, args.color_seed)
        except RasterError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2

    run_reports = {
        mode: _run_report(mode, results[mode], samples[mode] if args.bench else None)
        for mode in modes
    }
    agreement = None
    if len(modes) == 2:
        agreement = label_agreement(
            results[Mode.WITH_THRESHOLD].s5_labels,
            results[Mode.WITHOUT_THRESHOLD].s5_labels,
        )

    for mode in modes:
        rep = run_reports[mode]
        print(
            f"{mode.value}: threshold={rep['threshold']}"
            f" basins={rep['basin_count']}"
            f" watershed_pixels={rep['watershed_pixels']}"
            f" total_ms={rep['total_ms']:.2f}"
        )
        if args.bench:
            stats = rep["bench_stats_ms"]
            print(
                f"{mode.value}: bench n={args.bench}"
                f" min={stats['min']:.2f}ms median={stats['median']:.2f}ms"
                f" mean={stats['mean']:.2f}ms"
            )
    if agreement is not None:
        print(f"agreement: {agreement:.6f}")

    if args.report_json:
        if len(modes) == 2:
            document = {
                "mode": "both",
                "agreement": agreement,
                "runs": [run_reports[m] for m in modes],
            }
        else:
            document = run_reports[modes[0]]
        try:
            Path(args.report_json).write_text(
                json.dumps(document, sort_keys=True, indent=2) + "\n"
            )
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return 2

    return 0


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
