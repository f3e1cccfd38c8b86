"""Benchmark harness: run enhancement experiments and emit report tables.

The protocol mirrors the common evaluation setup for guided IR upscaling:
the longest-wavelength band of each scene is block-downscaled to simulate
the low-resolution sensor, enhanced back up with the RGB guide, and scored
against the original with PSNR/SSIM. The plain upscaled image (bicubic, or
an externally produced approximation from ``approx_dir``) is the baseline.

Scenes are independent, so they run on a thread pool (numpy releases the
GIL in the heavy kernels). Results are reduced in scene-id order no matter
the thread count, keeping aggregate floats bit-stable.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from io import StringIO
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataset import DatasetManifest, SceneData, ingest_dataset
from .guided import FilterParams, girre_enhance
from .image import PlanarImage, load_image
from .metrics import compare
from .resample import ScaleFactor, downscale, upscale_bicubic

THREADS_ENV_VAR = "GIRRE_THREADS"

_APPROX_SUFFIXES = (".npy", ".png", ".pgm")


@dataclass(frozen=True)
class SceneResult:
    scene_id: str
    girre_psnr_db: float
    girre_ssim: float
    baseline_psnr_db: float
    baseline_ssim: float

    @property
    def diff_db(self) -> float:
        return _psnr_diff(self.girre_psnr_db, self.baseline_psnr_db)


@dataclass(frozen=True)
class ExperimentResult:
    """One dataset evaluated at one (scale, params) setting."""

    dataset: str
    scale: ScaleFactor
    params: FilterParams
    mode: str  # "bicubic" or "external"
    scenes: tuple[SceneResult, ...]

    @property
    def girre_psnr_db(self) -> float:
        return float(np.mean([s.girre_psnr_db for s in self.scenes]))

    @property
    def girre_ssim(self) -> float:
        return float(np.mean([s.girre_ssim for s in self.scenes]))

    @property
    def baseline_psnr_db(self) -> float:
        return float(np.mean([s.baseline_psnr_db for s in self.scenes]))

    @property
    def baseline_ssim(self) -> float:
        return float(np.mean([s.baseline_ssim for s in self.scenes]))

    @property
    def diff_db(self) -> float:
        return _psnr_diff(self.girre_psnr_db, self.baseline_psnr_db)


def _psnr_diff(girre_db: float, baseline_db: float) -> float:
    # Identical images on both sides give +inf each; report "no change".
    if math.isinf(girre_db) and math.isinf(baseline_db):
        return 0.0
    return girre_db - baseline_db


def resolve_threads(threads: int | None = None) -> int:
    """Worker count: explicit argument, else GIRRE_THREADS, else cpu-bound."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV_VAR)
        if raw is None:
            return min(4, os.cpu_count() or 1)
        try:
            threads = int(raw)
        except ValueError:
            raise ValueError(
                f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}"
            ) from None
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def run_experiment(
    manifest: DatasetManifest,
    scale: ScaleFactor,
    params: FilterParams,
    approx_dir: str | Path | None = None,
    threads: int | None = None,
) -> ExperimentResult:
    """Evaluate one dataset at one scale/parameter setting.

    With ``approx_dir`` set, the baseline (and the transfer input) is the
    pre-upscaled approximation stored there per scene instead of the
    built-in bicubic upscale.
    """
    scenes = ingest_dataset(manifest, [scale])
    return _run_on_scenes(manifest.name, scenes, scale, params, approx_dir, threads)


def _run_on_scenes(
    dataset_name: str,
    scenes: Sequence[SceneData],
    scale: ScaleFactor,
    params: FilterParams,
    approx_dir: str | Path | None,
    threads: int | None,
) -> ExperimentResult:
    if not scenes:
        raise ValueError(f"dataset '{dataset_name}' has no scenes to evaluate")
    workers = resolve_threads(threads)

    def work(scene: SceneData) -> SceneResult:
        try:
            return _evaluate_scene(scene, scale, params, approx_dir)
        except Exception as exc:
            raise RuntimeError(f"scene '{scene.scene_id}': {exc}") from exc

    if workers == 1 or len(scenes) == 1:
        results = [work(s) for s in scenes]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, scenes))
    # map() preserves submission order and scenes arrive sorted by id, so
    # the aggregate below sums in a fixed order regardless of `workers`.
    return ExperimentResult(
        dataset=dataset_name,
        scale=scale,
        params=params,
        mode="external" if approx_dir is not None else "bicubic",
        scenes=tuple(results),
    )


def _evaluate_scene(
    scene: SceneData,
    scale: ScaleFactor,
    params: FilterParams,
    approx_dir: str | Path | None,
) -> SceneResult:
    lr = downscale(scene.gt, scale)
    if approx_dir is not None:
        approx = _load_approximation(approx_dir, scene.scene_id, scene.guide)
        enhanced = girre_enhance(lr, scene.guide, scale, params, approx_override=approx)
        baseline = approx
    else:
        baseline = upscale_bicubic(lr, scale)
        enhanced = girre_enhance(lr, scene.guide, scale, params)
    girre_report = compare(enhanced, scene.gt)
    baseline_report = compare(baseline, scene.gt)
    return SceneResult(
        scene_id=scene.scene_id,
        girre_psnr_db=girre_report.psnr_db,
        girre_ssim=girre_report.ssim,
        baseline_psnr_db=baseline_report.psnr_db,
        baseline_ssim=baseline_report.ssim,
    )


def _load_approximation(
    approx_dir: str | Path, scene_id: str, guide: PlanarImage
) -> PlanarImage:
    """Load the pre-upscaled approximation for one scene.

    Accepts ``<scene_id>.npy`` (float64, lossless — what our own tooling
    writes) or a grayscale ``.png``/``.pgm``.
    """
    approx_dir = Path(approx_dir)
    path = next((p for s in _APPROX_SUFFIXES if (p := approx_dir / (scene_id + s)).exists()), None)
    if path is None:
        raise FileNotFoundError(
            f"no approximation for scene '{scene_id}' in {approx_dir} "
            f"(looked for {scene_id}{{{','.join(_APPROX_SUFFIXES)}}})"
        )
    approx = PlanarImage(np.load(path)) if path.suffix == ".npy" else load_image(path)
    if approx.channels != 1:
        raise ValueError(f"approximation {path} must be grayscale, has {approx.channels} channels")
    if (approx.height, approx.width) != (guide.height, guide.width):
        raise ValueError(
            f"approximation {path} is {approx.width}x{approx.height} but the "
            f"(cropped) guide is {guide.width}x{guide.height}"
        )
    return approx


def sweep_radius(
    manifest: DatasetManifest,
    scale: ScaleFactor,
    radii: Sequence[int],
    epsilon: float,
    approx_dir: str | Path | None = None,
    threads: int | None = None,
) -> tuple[int, list[ExperimentResult]]:
    """Evaluate every radius in ``radii``; returns (best radius, results).

    Best means largest PSNR gain over the baseline; ties go to the smaller
    radius. The dataset is ingested once and reused across radii.
    """
    if not radii:
        raise ValueError("radius sweep needs at least one radius")
    scenes = ingest_dataset(manifest, [scale])
    results = []
    for radius in radii:
        params = FilterParams(radius=radius, epsilon=epsilon)
        results.append(_run_on_scenes(manifest.name, scenes, scale, params, approx_dir, threads))
    best = max(results, key=lambda r: (r.diff_db, -r.params.radius))
    return best.params.radius, results


# ---------------------------------------------------------------------------
# Reports


def emit_report(
    results: ExperimentResult | Sequence[ExperimentResult],
    fmt: str = "csv",
    path: str | Path | None = None,
) -> str:
    """Render results as a CSV or markdown table; optionally write ``path``.

    Rows are grouped by (scale, radius) in first-appearance order, one row
    per dataset plus an ``Average`` row per group, mirroring the usual
    cross-dataset comparison tables. CSV additionally carries per-scene
    rows at full precision; markdown keeps the compact PSNR (SSIM) look.
    The same results always produce byte-identical output.
    """
    if isinstance(results, ExperimentResult):
        results = [results]
    results = list(results)
    if not results:
        raise ValueError("no experiment results to report")
    if fmt not in ("csv", "markdown"):
        raise ValueError(f"unknown report format {fmt!r} (expected 'csv' or 'markdown')")
    groups = _group_results(results)
    text = _render_csv(groups) if fmt == "csv" else _render_markdown(groups)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="")
    return text


def _group_results(
    results: Sequence[ExperimentResult],
) -> list[tuple[tuple[ScaleFactor, int], list[ExperimentResult]]]:
    groups: dict[tuple, list[ExperimentResult]] = {}
    for res in results:
        groups.setdefault((res.scale, res.params.radius), []).append(res)
    return list(groups.items())


def _best_tag(girre_db: float, baseline_db: float) -> str:
    if girre_db > baseline_db:
        return "girre"
    if baseline_db > girre_db:
        return "baseline"
    return "tie"


_CSV_HEADER = (
    "dataset",
    "scale",
    "radius",
    "epsilon",
    "mode",
    "scene",
    "girre_psnr_db",
    "girre_ssim",
    "baseline_psnr_db",
    "baseline_ssim",
    "diff_db",
    "best",
)


def _render_csv(groups) -> str:
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)

    def fmt(value: float) -> str:
        return "inf" if math.isinf(value) else f"{value:.10f}"

    for (scale, radius), members in groups:
        for res in members:
            common = [res.dataset, str(scale), radius, f"{res.params.epsilon:g}", res.mode]
            for s in res.scenes:
                writer.writerow(
                    common
                    + [
                        s.scene_id,
                        fmt(s.girre_psnr_db),
                        fmt(s.girre_ssim),
                        fmt(s.baseline_psnr_db),
                        fmt(s.baseline_ssim),
                        fmt(s.diff_db),
                        _best_tag(s.girre_psnr_db, s.baseline_psnr_db),
                    ]
                )
            writer.writerow(
                common
                + [
                    "",
                    fmt(res.girre_psnr_db),
                    fmt(res.girre_ssim),
                    fmt(res.baseline_psnr_db),
                    fmt(res.baseline_ssim),
                    fmt(res.diff_db),
                    _best_tag(res.girre_psnr_db, res.baseline_psnr_db),
                ]
            )
        writer.writerow(_average_csv_row(scale, radius, members, fmt))
    return buf.getvalue()


def _average_csv_row(scale, radius, members, fmt):
    girre_db, girre_ssim, base_db, base_ssim, diff = _group_average(members)
    mode = members[0].mode if len({m.mode for m in members}) == 1 else "mixed"
    eps = {m.params.epsilon for m in members}
    eps_text = f"{eps.pop():g}" if len(eps) == 1 else "mixed"
    return [
        "Average",
        str(scale),
        radius,
        eps_text,
        mode,
        "",
        fmt(girre_db),
        fmt(girre_ssim),
        fmt(base_db),
        fmt(base_ssim),
        fmt(diff),
        _best_tag(girre_db, base_db),
    ]


def _group_average(members) -> tuple[float, float, float, float, float]:
    girre_db = float(np.mean([m.girre_psnr_db for m in members]))
    base_db = float(np.mean([m.baseline_psnr_db for m in members]))
    return (
        girre_db,
        float(np.mean([m.girre_ssim for m in members])),
        base_db,
        float(np.mean([m.baseline_ssim for m in members])),
        _psnr_diff(girre_db, base_db),
    )


def _render_markdown(groups) -> str:
    lines = [
        "| Scale | Radius | Dataset | GIRRE PSNR (SSIM) | Baseline PSNR (SSIM) | Diff (dB) |",
        "|:-----:|-------:|:--------|------------------:|---------------------:|----------:|",
    ]

    def cell(psnr_db: float, ssim: float, bold: bool) -> str:
        text = ("inf" if math.isinf(psnr_db) else f"{psnr_db:.2f}") + f" ({ssim:.4f})"
        return f"**{text}**" if bold else text

    for (scale, radius), members in groups:
        rows = [(m.dataset, m.girre_psnr_db, m.girre_ssim, m.baseline_psnr_db, m.baseline_ssim) for m in members]
        rows.append(("Average",) + _group_average(members)[:4])
        for dataset, g_db, g_ssim, b_db, b_ssim in rows:
            diff = _psnr_diff(g_db, b_db)
            diff_text = "inf" if math.isinf(diff) else f"{diff:+.2f}"
            lines.append(
                f"| {scale} | {radius} | {dataset} "
                f"| {cell(g_db, g_ssim, g_db >= b_db)} "
                f"| {cell(b_db, b_ssim, b_db > g_db)} "
                f"| {diff_text} |"
            )
    return "\n".join(lines) + "\n"
