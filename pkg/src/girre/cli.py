"""Command-line frontend.

Subcommands:
  enhance    upscale one IR image with its RGB guide
  evaluate   benchmark a dataset manifest at one or more scale factors
  sweep      find the best filter radius on a dataset
  params     print the default radius/epsilon for a scale factor

Exit codes: 0 success, 1 usage error (bad flags/values), 2 runtime or data
error (unreadable files, incompatible dimensions, ...).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .bench import THREADS_ENV_VAR, emit_report, run_experiment, sweep_radius
from .dataset import load_manifest
from .guided import (
    DEFAULT_PARAMS,
    UPSCALER_IDS,
    FilterParams,
    girre_enhance,
    lookup_params,
)
from .image import load_image, save_image
from .resample import ScaleFactor


class _UsageError(Exception):
    """Bad flag values detected after argparse (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; our contract reserves 2
    # for runtime failures, so remap to 1.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="girre", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("enhance", help="enhance one low-resolution IR image")
    p.add_argument("--ir", required=True, help="low-resolution IR image (grayscale)")
    p.add_argument("--guide", required=True, help="registered high-resolution RGB guide")
    p.add_argument("--scale", required=True, help="upscale factor, e.g. 4x4")
    p.add_argument("--out", required=True, help="output image path (.png/.pgm)")
    p.add_argument("--radius", type=int, help="filter window radius (default: per-scale table)")
    p.add_argument("--epsilon", type=float, help="ridge regularization (default: per-scale table)")
    p.add_argument("--approx", help="pre-upscaled approximation image (skips bicubic upscale)")
    p.add_argument("--bitdepth", type=int, choices=(8, 16), default=16, help="output bit depth")
    p.set_defaults(func=_cmd_enhance)

    p = sub.add_parser("evaluate", help="benchmark a dataset manifest")
    p.add_argument("--manifest", required=True, help="dataset manifest JSON")
    p.add_argument("--scales", default="2x2,3x3,4x4,8x8", help="comma-separated scale factors")
    p.add_argument("--mode", choices=("bicubic", "external"), default="bicubic")
    p.add_argument("--approx-dir", help="directory of per-scene approximations (external mode)")
    p.add_argument("--radius", type=int, help="override the per-scale table radius")
    p.add_argument("--epsilon", type=float, help="override the per-scale table epsilon")
    p.add_argument("--report", help="write the report table to this file")
    p.add_argument("--format", choices=("csv", "markdown"), default="csv")
    p.add_argument("--threads", type=int, help=f"worker threads (default: ${THREADS_ENV_VAR} or 4)")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="sweep the filter radius on a dataset")
    p.add_argument("--manifest", required=True, help="dataset manifest JSON")
    p.add_argument("--scale", required=True, help="scale factor, e.g. 4x4")
    p.add_argument("--radii", required=True, help="inclusive radius range, e.g. 1..20")
    p.add_argument("--epsilon", type=float, default=DEFAULT_PARAMS.epsilon)
    p.add_argument("--approx-dir", help="directory of per-scene approximations")
    p.add_argument("--report", help="write the per-radius table to this file")
    p.add_argument("--format", choices=("csv", "markdown"), default="csv")
    p.add_argument("--threads", type=int, help=f"worker threads (default: ${THREADS_ENV_VAR} or 4)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("params", help="print default parameters for a scale factor")
    p.add_argument("--scale", required=True, help="scale factor, e.g. 4x4")
    p.add_argument("--upscaler", choices=UPSCALER_IDS, default="bicubic")
    p.set_defaults(func=_cmd_params)

    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse --help (0) or usage error (1)
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"girre: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"girre: error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


def _parse_scale(text: str) -> ScaleFactor:
    try:
        return ScaleFactor.parse(text)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _parse_radii(text: str) -> list[int]:
    first, sep, last = text.partition("..")
    try:
        if not sep:
            values = [int(first)]
        else:
            lo, hi = int(first), int(last)
            if lo > hi:
                raise _UsageError(f"malformed radius range {text!r}: {lo} > {hi}")
            values = list(range(lo, hi + 1))
    except ValueError:
        raise _UsageError(f"malformed radius range {text!r} (expected e.g. 1..20)") from None
    if values[0] < 0:
        raise _UsageError(f"radii must be >= 0, got {values[0]}")
    return values


def _resolve_params(
    scale: ScaleFactor, radius: int | None, epsilon: float | None, upscaler: str = "bicubic"
) -> FilterParams:
    """Explicit flags win; anything omitted comes from the per-scale table."""
    if radius is None or epsilon is None:
        try:
            defaults = lookup_params(scale, upscaler)
        except ValueError as exc:
            raise _UsageError(f"{exc} — use --radius (and optionally --epsilon)") from None
        radius = defaults.radius if radius is None else radius
        epsilon = defaults.epsilon if epsilon is None else epsilon
    try:
        return FilterParams(radius=radius, epsilon=epsilon)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _check_threads(threads: int | None) -> int | None:
    if threads is not None:
        if threads < 1:
            raise _UsageError(f"--threads must be >= 1, got {threads}")
        return threads
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is not None:
        try:
            value = int(raw)
        except ValueError:
            raise _UsageError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}") from None
        if value < 1:
            raise _UsageError(f"{THREADS_ENV_VAR} must be >= 1, got {value}")
    return None


def _cmd_enhance(args) -> int:
    scale = _parse_scale(args.scale)
    params = _resolve_params(scale, args.radius, args.epsilon)
    ir = load_image(args.ir)
    guide = load_image(args.guide)
    approx = load_image(args.approx) if args.approx else None
    out = girre_enhance(ir, guide, scale, params, approx_override=approx)
    save_image(out, args.out, bitdepth=args.bitdepth)
    print(
        f"enhanced {ir.width}x{ir.height} -> {out.width}x{out.height} "
        f"(scale {scale}, radius={params.radius} epsilon={params.epsilon:g}) -> {args.out}"
    )
    return 0


def _cmd_evaluate(args) -> int:
    threads = _check_threads(args.threads)
    scales = [_parse_scale(s) for s in args.scales.split(",") if s]
    if not scales:
        raise _UsageError("--scales is empty")
    if args.mode == "external" and not args.approx_dir:
        raise _UsageError("--mode external requires --approx-dir")
    if args.mode == "bicubic" and args.approx_dir:
        raise _UsageError("--approx-dir only applies to --mode external")
    approx_dir = args.approx_dir if args.mode == "external" else None
    upscaler = args.mode  # table column matches the approximation source
    param_list = [_resolve_params(s, args.radius, args.epsilon, upscaler) for s in scales]
    manifest = load_manifest(args.manifest)
    results = [
        run_experiment(manifest, scale, params, approx_dir=approx_dir, threads=threads)
        for scale, params in zip(scales, param_list)
    ]
    if args.report:
        emit_report(results, args.format, args.report)
    for res in results:
        print(
            f"scale {res.scale} radius {res.params.radius}: "
            f"girre {_db(res.girre_psnr_db)} ({res.girre_ssim:.4f})  "
            f"baseline {_db(res.baseline_psnr_db)} ({res.baseline_ssim:.4f})  "
            f"diff {_db(res.diff_db, '+')}"
        )
    return 0


def _cmd_sweep(args) -> int:
    threads = _check_threads(args.threads)
    scale = _parse_scale(args.scale)
    radii = _parse_radii(args.radii)
    if args.epsilon <= 0:
        raise _UsageError(f"--epsilon must be > 0, got {args.epsilon:g}")
    manifest = load_manifest(args.manifest)
    best, results = sweep_radius(
        manifest, scale, radii, args.epsilon, approx_dir=args.approx_dir, threads=threads
    )
    if args.report:
        emit_report(results, args.format, args.report)
    for res in results:
        marker = " <- best" if res.params.radius == best else ""
        print(f"radius {res.params.radius:3d}: diff {_db(res.diff_db, '+')}{marker}")
    print(f"best radius: {best}")
    return 0


def _cmd_params(args) -> int:
    scale = _parse_scale(args.scale)
    try:
        params = lookup_params(scale, args.upscaler)
    except ValueError as exc:
        raise _UsageError(f"{exc} — pass --radius explicitly to enhance/evaluate") from None
    print(f"radius={params.radius} epsilon={params.epsilon:g}")
    return 0


def _db(value: float, sign: str = "") -> str:
    return f"{value:{sign}.2f} dB"


if __name__ == "__main__":
    sys.exit(main())
