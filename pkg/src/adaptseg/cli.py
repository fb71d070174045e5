"""Command-line front end: segment, synth, noise, and bench."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .errors import DegenerateImageError, DimensionError, ImageFormatError, ParameterError
from .image_io import (
    add_gaussian_noise,
    load_image,
    load_mask,
    save_image,
    save_lambda_heatmap,
    save_mask,
)
from .lambda_maps import (
    CartoonTextureStrategy,
    ConstantStrategy,
    MeanMedianStrategy,
    ThresholdStrategy,
    initial_lambda_map,
    lambda_thr,
)
from .metrics import dice_jaccard
from .report import RunReport, parse_manifest, report_row, write_reports
from .solver import SolverConfig, segment
from .synth import SHAPES, make_shape

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERIC = 3


def _build_strategy(
    kind,
    lam=None,
    lambda_min=None,
    lambda_max=None,
    ctd_sigma=2.0,
    ctd_size=3,
    mm_h1=3,
    mm_h2=7,
    mm_t=0.5,
):
    kind = kind.lower()
    if kind == "cen":
        if lam is None:
            raise ParameterError("strategy 'cen' requires a lambda value")
        return ConstantStrategy(lam, lambda_min, lambda_max)
    if lambda_min is None or lambda_max is None:
        raise ParameterError(f"strategy {kind!r} requires lambda_min and lambda_max")
    if kind == "ctd":
        return CartoonTextureStrategy(lambda_min, lambda_max, ctd_sigma, ctd_size)
    if kind == "mm":
        return MeanMedianStrategy(lambda_min, lambda_max, mm_h1, mm_h2, mm_t)
    if kind == "thr":
        return ThresholdStrategy(lambda_min, lambda_max)
    raise ParameterError(f"unknown strategy {kind!r} (expected cen, ctd, mm, or thr)")


def _strategy_bounds(strategy):
    if isinstance(strategy, ConstantStrategy):
        if strategy.lambda_min is None or strategy.lambda_max is None:
            raise ParameterError(
                "lambda-map export for 'cen' needs --lambda-min/--lambda-max for the gray scale"
            )
        return strategy.lambda_min, strategy.lambda_max
    return strategy.lambda_min, strategy.lambda_max


def _effective_lambda_map(ubar, result, strategy):
    # the map the final iterate ran with, before the internal rescaling
    if isinstance(strategy, ThresholdStrategy):
        return lambda_thr(result.u_final, strategy)
    return initial_lambda_map(ubar, strategy)


def _report_lambdas(strategy):
    if isinstance(strategy, ConstantStrategy):
        return strategy.lam, strategy.lam
    return strategy.lambda_min, strategy.lambda_max


def _report_line(report: RunReport) -> str:
    row = report_row(report)
    return " ".join(f"{key}={row[key]}" for key in row)


def _run_segmentation(ubar, strategy, cfg, image_name, truth_path=None):
    start = time.perf_counter()
    result = segment(ubar, strategy, cfg)
    wall_ms = (time.perf_counter() - start) * 1000.0
    dice = jaccard = None
    if truth_path:
        dice, jaccard = dice_jaccard(result.mask, load_mask(truth_path))
    lo, hi = _report_lambdas(strategy)
    report = RunReport(
        image=image_name,
        strategy=strategy.name,
        lambda_min=lo,
        lambda_max=hi,
        mu=cfg.mu,
        it=result.outer_iterations,
        it_gs_mean=result.mean_gs_iterations,
        dice=dice,
        jaccard=jaccard,
        wall_ms=wall_ms,
    )
    return result, report


def cmd_segment(args) -> int:
    ubar = load_image(args.input)
    strategy = _build_strategy(
        args.strategy,
        lam=args.lam,
        lambda_min=args.lambda_min,
        lambda_max=args.lambda_max,
        ctd_sigma=args.ctd_sigma,
        ctd_size=args.ctd_size,
        mm_h1=args.mm_h1,
        mm_h2=args.mm_h2,
        mm_t=args.mm_t,
    )
    cfg = SolverConfig(
        mu=args.mu,
        tol=args.tol,
        maxit=args.maxit,
        tol_gs=args.tol_gs,
        maxit_gs=args.maxit_gs,
        alpha=args.alpha,
    )
    result, report = _run_segmentation(ubar, strategy, cfg, args.input, args.truth)
    save_mask(result.mask, args.out_mask)
    if args.out_u:
        save_image(result.u_final, args.out_u)
    if args.out_lambda_map:
        save_lambda_heatmap(
            _effective_lambda_map(ubar, result, strategy),
            _strategy_bounds(strategy),
            args.out_lambda_map,
        )
    if args.trace:
        Path(args.trace).write_text(result.trace_table(), encoding="ascii")
    if args.figure:
        from .figures import render_run_figure

        lam_map = _effective_lambda_map(ubar, result, strategy)
        render_run_figure(
            args.figure, ubar, result, lam_map, title=f"{Path(args.input).name} [{strategy.name}]"
        )
    print(_report_line(report))
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        rows, cols = (int(part) for part in args.size.lower().split("x"))
    except ValueError as exc:
        raise ParameterError(f"bad --size {args.size!r}, expected MxN") from exc
    image, mask = make_shape(args.shape, rows, cols, fg=args.fg, bg=args.bg, seed=args.seed)
    save_image(image, args.out_image)
    save_mask(mask, args.out_mask)
    print(f"wrote {args.out_image} and {args.out_mask} ({rows}x{cols} {args.shape})")
    return EXIT_OK


def cmd_noise(args) -> int:
    noisy = add_gaussian_noise(load_image(args.input), args.sigma, args.seed)
    save_image(noisy, args.output)
    print(f"wrote {args.output} (sigma={args.sigma}, seed={args.seed})")
    return EXIT_OK


def _require(fields: dict, key: str) -> str:
    if key not in fields:
        raise ParameterError(f"manifest line {fields.get('_line', '?')}: missing {key}=")
    return fields[key]


def _run_bench_row(fields: dict, run_id: str, outdir: Path, figures: bool) -> RunReport:
    image_path = _require(fields, "image")
    ubar = load_image(image_path)
    strategy = _build_strategy(
        _require(fields, "strategy"),
        lam=float(fields["lambda"]) if "lambda" in fields else None,
        lambda_min=float(fields["lambda_min"]) if "lambda_min" in fields else None,
        lambda_max=float(fields["lambda_max"]) if "lambda_max" in fields else None,
        ctd_sigma=float(fields.get("ctd_sigma", 2.0)),
        ctd_size=int(fields.get("ctd_size", 3)),
        mm_h1=int(fields.get("mm_h1", 3)),
        mm_h2=int(fields.get("mm_h2", 7)),
        mm_t=float(fields.get("mm_t", 0.5)),
    )
    cfg = SolverConfig(
        mu=float(_require(fields, "mu")),
        tol=float(fields.get("tol", 1e-6)),
        maxit=int(fields.get("maxit", 30)),
        tol_gs=float(fields.get("tol_gs", 1e-2)),
        maxit_gs=int(fields.get("maxit_gs", 50)),
        alpha=float(fields.get("alpha", 0.5)),
    )
    result, report = _run_segmentation(ubar, strategy, cfg, image_path, fields.get("truth"))
    save_mask(result.mask, outdir / f"{run_id}_mask.pgm")
    if figures:
        from .figures import render_run_figure

        lam_map = _effective_lambda_map(ubar, result, strategy)
        render_run_figure(
            outdir / f"{run_id}.png",
            ubar,
            result,
            lam_map,
            title=f"{Path(image_path).name} [{strategy.name}]",
        )
    return report


def cmd_bench(args) -> int:
    rows = parse_manifest(args.manifest)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    reports = []
    failures = 0
    for idx, fields in enumerate(rows, 1):
        run_id = fields.get("id", f"run{idx:03d}")
        try:
            report = _run_bench_row(fields, run_id, outdir, figures=args.figures)
        except Exception as exc:  # record the row, keep the batch going
            report = RunReport(
                image=fields.get("image", "?"),
                strategy=fields.get("strategy", "?"),
                error=f"{type(exc).__name__}: {exc}",
            )
            failures += 1
        reports.append(report)
        print(_report_line(reports[-1]))
    write_reports(reports, outdir / "report.txt", outdir / "report.csv")
    if not rows:
        print("warning: empty manifest, nothing to run", file=sys.stderr)
        return EXIT_OK
    return EXIT_NUMERIC if failures == len(rows) else EXIT_OK


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", required=True, choices=("cen", "ctd", "mm", "thr"))
    p.add_argument("--lambda", dest="lam", type=float, help="fidelity weight (cen)")
    p.add_argument("--lambda-min", type=float, help="lower weight bound (adaptive)")
    p.add_argument("--lambda-max", type=float, help="upper weight bound (adaptive)")
    p.add_argument("--mu", type=float, required=True, help="splitting weight")
    p.add_argument("--alpha", type=float, default=0.5, help="mask threshold")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--maxit", type=int, default=30)
    p.add_argument("--tol-gs", type=float, default=1e-2)
    p.add_argument("--maxit-gs", type=int, default=50)
    p.add_argument("--ctd-sigma", type=float, default=2.0)
    p.add_argument("--ctd-size", type=int, default=3)
    p.add_argument("--mm-h1", type=int, default=3)
    p.add_argument("--mm-h2", type=int, default=7)
    p.add_argument("--mm-t", type=float, default=0.5)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adaptseg",
        description="Two-phase segmentation with spatially adaptive regularization.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="segment one image")
    seg.add_argument("--input", required=True, help="grayscale image (PGM or PNG)")
    _add_solver_flags(seg)
    seg.add_argument("--out-mask", required=True, help="output mask (PGM)")
    seg.add_argument("--out-u", help="output relaxed indicator (PGM)")
    seg.add_argument("--out-lambda-map", help="output weight-map heatmap (PGM)")
    seg.add_argument("--trace", help="output convergence trace (text)")
    seg.add_argument("--figure", help="output diagnostic figure (PNG)")
    seg.add_argument("--truth", help="ground-truth mask for Dice/Jaccard")
    seg.set_defaults(func=cmd_segment)

    synth = sub.add_parser("synth", help="generate a synthetic image + mask pair")
    synth.add_argument("--shape", required=True, choices=SHAPES)
    synth.add_argument("--size", required=True, help="image size as MxN")
    synth.add_argument("--fg", type=float, default=0.8)
    synth.add_argument("--bg", type=float, default=0.2)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out-image", required=True)
    synth.add_argument("--out-mask", required=True)
    synth.set_defaults(func=cmd_synth)

    noise = sub.add_parser("noise", help="add seeded Gaussian noise to an image")
    noise.add_argument("--input", required=True)
    noise.add_argument("--sigma", type=float, required=True, help="std dev on the 0-255 scale")
    noise.add_argument("--seed", type=int, default=0)
    noise.add_argument("--output", required=True)
    noise.set_defaults(func=cmd_noise)

    bench = sub.add_parser("bench", help="run a manifest of segmentations")
    bench.add_argument("--manifest", required=True, help="key=value rows, one run per line")
    bench.add_argument("--out-dir", required=True)
    bench.add_argument(
        "--no-figures", dest="figures", action="store_false", help="skip figure rendering"
    )
    bench.set_defaults(func=cmd_bench, figures=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad usage; remap
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"adaptseg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ImageFormatError) as exc:
        print(f"adaptseg: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DegenerateImageError, DimensionError) as exc:
        print(f"adaptseg: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
