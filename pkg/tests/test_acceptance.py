"""Acceptance gate: one test per shipping criterion, tolerances pinned.

Each test prints a single ``ACCEPTANCE <n> ...: PASS/FAIL/SKIP`` line
(visible with ``pytest -s``), so a full run doubles as the sign-off
checklist. Criteria 3 and 4 need the real CAVE/Harvard datasets, which
cannot be redistributed; point GIRRE_CAVE_MANIFEST / GIRRE_HARVARD_MANIFEST
at locally built manifests to enable them — they skip otherwise and the
bundled synthetic dataset covers the structural paths.
"""

import csv
import io
import os
import statistics
import time
from contextlib import contextmanager

import numpy as np
import pytest

from girre import (
    FilterParams,
    PlanarImage,
    ScaleFactor,
    box_mean,
    compute_coefficients,
    downscale,
    girre_enhance,
    guided_transfer,
    ingest_dataset,
    load_manifest,
    lookup_params,
    psnr,
    run_experiment,
    ssim,
    sweep_radius,
    upscale_bicubic,
)
from girre.cli import main as cli_main

from oracles import naive_guided_transfer, naive_psnr, naive_ssim

CAVE_ENV = "GIRRE_CAVE_MANIFEST"
HARVARD_ENV = "GIRRE_HARVARD_MANIFEST"


@contextmanager
def report(line: str):
    try:
        yield
    except pytest.skip.Exception as exc:
        print(f"ACCEPTANCE {line}: SKIP ({exc})")
        raise
    except BaseException:
        print(f"ACCEPTANCE {line}: FAIL")
        raise
    print(f"ACCEPTANCE {line}: PASS")


def _required_manifest(env_var: str):
    path = os.environ.get(env_var)
    if not path:
        pytest.skip(f"set {env_var} to a dataset manifest to enable this criterion")
    return load_manifest(path)


def test_criterion_1_oracle_equivalence():
    """200 random pairs: fast pipeline vs naive per-pixel, <= 1e-8, < 30 s."""
    with report("1 oracle equivalence"):
        combos = [(r, e) for r in (0, 1, 3, 6, 15) for e in (1e-6, 1e-4, 1e-2)]
        rng = np.random.default_rng(20240801)
        start = time.perf_counter()
        worst = 0.0
        for i in range(200):
            radius, epsilon = combos[i % len(combos)]
            h = int(rng.integers(31, 65))
            w = int(rng.integers(31, 65))
            guide = rng.uniform(size=(h, w))
            approx = rng.uniform(size=(h, w))
            fast = guided_transfer(
                PlanarImage(approx), PlanarImage(guide), FilterParams(radius, epsilon)
            ).plane(0)
            slow = naive_guided_transfer(approx, guide, radius, epsilon)
            err = float(np.max(np.abs(fast - slow)))
            worst = max(worst, err)
            assert err <= 1e-8, (
                f"pair {i} ({h}x{w}, r={radius}, eps={epsilon:g}): max error {err:.3e}"
            )
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"oracle sweep took {elapsed:.1f}s (budget 30s)"


def test_criterion_2_degeneracy_suite(rng):
    """Constant/self-guide degeneracies and the stated filter invariants."""
    with report("2 degeneracy suite"):
        # Constant guide => slope identically zero and output is double box
        # smoothing. 0.5 is dyadic, so the cancellations are bit-exact.
        approx = PlanarImage(rng.uniform(size=(1, 24, 24)))
        const_guide = PlanarImage(np.full((1, 24, 24), 0.5))
        params = FilterParams(3, 1e-4)
        coeffs = compute_coefficients(const_guide, approx, params)
        assert np.all(coeffs.slope == 0.0)
        double_box = box_mean(box_mean(approx, 3), 3)
        out = guided_transfer(approx, const_guide, params)
        assert np.array_equal(out.planes, double_box.planes)

        # Self-guide with vanishing ridge: identity on high-variance
        # interiors (uniform noise keeps every window high-variance).
        img = PlanarImage(rng.uniform(size=(1, 48, 48)))
        for radius in (1, 3):
            out = guided_transfer(img, img, FilterParams(radius, 1e-12)).plane(0)
            core = slice(2 * radius, 48 - 2 * radius)
            err = np.max(np.abs(out[core, core] - img.plane(0)[core, core]))
            assert err < 1e-4, f"self-guide r={radius}: {err:.2e}"

        # Constants survive the full enhancement exactly (dyadic values
        # stay bit-identical through resampling, SAT sums, and the ridge).
        lr = PlanarImage(np.full((1, 12, 12), 0.5))
        rgb = PlanarImage(np.full((3, 36, 36), 0.75))
        enhanced = girre_enhance(lr, rgb, ScaleFactor(3, 3), FilterParams(3, 1e-4))
        assert np.all(enhanced.planes == 0.5)

        # Epsilon monotonicity: |slope| never grows when the ridge widens.
        guide = PlanarImage(rng.uniform(size=(1, 20, 20)))
        target = PlanarImage(rng.uniform(size=(1, 20, 20)))
        slopes = [
            np.abs(compute_coefficients(guide, target, FilterParams(2, e)).slope)
            for e in (1e-6, 1e-4, 1e-2)
        ]
        assert np.all(slopes[1] <= slopes[0]) and np.all(slopes[2] <= slopes[1])

        # Per-window model is affine in the guide (un-averaged form).
        c = compute_coefficients(guide, target, FilterParams(2, 1e-4))
        g = guide.plane(0)
        window = g[6:11, 6:11]
        a_k, b_k = c.slope[8, 8], c.offset[8, 8]
        pred = a_k * window + b_k
        assert np.max(np.abs((pred - pred[0, 0]) - a_k * (window - window[0, 0]))) < 1e-14

        # Affine guide covariance: alpha=2 with epsilon*alpha^2 is a pure
        # power-of-two rescaling -> bit-exact; fixed epsilon stays within
        # 1e-3 for alpha in [0.5, 2].
        base = guided_transfer(target, guide, FilterParams(2, 1e-4))
        doubled = guided_transfer(
            target, PlanarImage(2.0 * guide.planes), FilterParams(2, 4e-4)
        )
        assert np.array_equal(base.planes, doubled.planes)
        for alpha in (0.5, 1.3, 2.0):
            moved = guided_transfer(
                target,
                PlanarImage(alpha * guide.planes + 0.05),
                FilterParams(2, alpha**2 * 1e-4),
            )
            assert np.max(np.abs(moved.planes - base.planes)) < 1e-8
            fixed = guided_transfer(
                target, PlanarImage(alpha * guide.planes + 0.05), FilterParams(2, 1e-4)
            )
            assert np.max(np.abs(fixed.planes - base.planes)) < 1e-3


def test_criterion_3_cave_reproduction(tmp_path):
    """CAVE 4x4 r=6: gain within +-0.5 dB of 1.88, PSNR within +-1.0 of 36.44."""
    with report("3 CAVE reproduction"):
        manifest = _required_manifest(CAVE_ENV)
        scale = ScaleFactor(4, 4)
        params = FilterParams(6, 1e-4)
        result = run_experiment(manifest, scale, params)
        assert abs(result.diff_db - 1.88) <= 0.5, (
            f"gain {result.diff_db:.3f} dB vs expected 1.88 +- 0.5"
        )
        assert abs(result.girre_psnr_db - 36.44) <= 1.0, (
            f"absolute {result.girre_psnr_db:.3f} dB vs expected 36.44 +- 1.0"
        )

        # External-approximation mode must reproduce these numbers
        # bit-exactly when fed the same bicubic approximations.
        approx_dir = tmp_path / "approx"
        approx_dir.mkdir()
        for scene in ingest_dataset(manifest, [scale]):
            approx = upscale_bicubic(downscale(scene.gt, scale), scale)
            np.save(approx_dir / f"{scene.scene_id}.npy", approx.plane(0))
        external = run_experiment(manifest, scale, params, approx_dir=approx_dir)
        assert external.scenes == result.scenes


def test_criterion_3_structural_external_mode(synthetic_dataset, tmp_path):
    """Synthetic stand-in for the external-mode bit-exactness note."""
    with report("3b external-approx structural check"):
        scale = ScaleFactor(4, 4)
        params = FilterParams(6, 1e-4)
        approx_dir = tmp_path / "approx"
        approx_dir.mkdir()
        for scene in ingest_dataset(synthetic_dataset, [scale]):
            approx = upscale_bicubic(downscale(scene.gt, scale), scale)
            np.save(approx_dir / f"{scene.scene_id}.npy", approx.plane(0))
        bicubic_mode = run_experiment(synthetic_dataset, scale, params)
        external_mode = run_experiment(synthetic_dataset, scale, params, approx_dir=approx_dir)
        assert external_mode.scenes == bicubic_mode.scenes


@pytest.mark.parametrize("env_var", [CAVE_ENV, HARVARD_ENV])
def test_criterion_4_gain_positivity(env_var):
    """Dataset-average gain positive at every scale with table radii."""
    label = f"4 gain positivity ({env_var.split('_')[1].lower()})"
    with report(label):
        manifest = _required_manifest(env_var)
        for text in ("2x2", "3x3", "4x4", "8x8"):
            scale = ScaleFactor.parse(text)
            result = run_experiment(manifest, scale, lookup_params(scale))
            assert result.diff_db > 0.0, f"{text}: diff {result.diff_db:.3f} dB not positive"


def test_criterion_5_radius_sweep_consistency(synthetic_manifest, synthetic_dataset, tmp_path):
    """Sweep best within 0.05 dB of per-radius CLI reruns; thread-stable."""
    with report("5 radius sweep consistency"):
        scale = ScaleFactor(4, 4)
        radii = range(1, 21)
        best, table = sweep_radius(synthetic_dataset, scale, radii, 1e-4, threads=2)
        best_diff = next(r.diff_db for r in table if r.params.radius == best)

        rerun_diffs = {}
        for radius in radii:
            report_path = tmp_path / f"r{radius}.csv"
            code = cli_main(
                [
                    "evaluate",
                    "--manifest", str(synthetic_manifest),
                    "--scales", "4x4",
                    "--radius", str(radius),
                    "--report", str(report_path),
                ]
            )
            assert code == 0
            rows = list(csv.reader(io.StringIO(report_path.read_text())))
            header, average = rows[0], rows[-1]
            assert average[0] == "Average"
            rerun_diffs[radius] = float(average[header.index("diff_db")])
        assert abs(best_diff - max(rerun_diffs.values())) <= 0.05
        assert best == max(sorted(rerun_diffs), key=lambda r: (rerun_diffs[r], -r))

        # Determinism across thread counts, down to the bits.
        for threads in (1, 3):
            best_t, table_t = sweep_radius(synthetic_dataset, scale, radii, 1e-4, threads=threads)
            assert best_t == best
            assert table_t == table


def test_criterion_6_metric_correctness(rng):
    """Pinned PSNR value, SSIM identity, and 1e-9 oracle agreement."""
    with report("6 metric correctness"):
        a = PlanarImage(np.full((1, 16, 16), 0.5))
        b = PlanarImage(np.full((1, 16, 16), 0.75))
        assert abs(psnr(a, b) - 12.0412) <= 1e-4

        img = PlanarImage(rng.uniform(size=(1, 32, 32)))
        assert abs(ssim(img, img) - 1.0) <= 1e-12

        for _ in range(10):
            x = rng.uniform(size=(64, 64))
            y = rng.uniform(size=(64, 64))
            assert abs(psnr(PlanarImage(x), PlanarImage(y)) - naive_psnr(x, y)) <= 1e-9
        for _ in range(3):
            x = rng.uniform(size=(64, 64))
            y = np.clip(x + rng.normal(0, 0.1, size=(64, 64)), 0, 1)
            assert abs(ssim(PlanarImage(x), PlanarImage(y)) - naive_ssim(x, y)) <= 1e-9


def test_criterion_7_radius_independent_runtime(rng):
    """512x512 transfer: median wall time at r=15 within 1.5x of r=1."""
    with report("7 radius-independent runtime"):
        guide = PlanarImage(rng.uniform(size=(1, 512, 512)))
        approx = PlanarImage(rng.uniform(size=(1, 512, 512)))

        def median_time(radius: int) -> float:
            params = FilterParams(radius, 1e-4)
            guided_transfer(approx, guide, params)  # warm-up
            samples = []
            for _ in range(9):
                t0 = time.perf_counter()
                guided_transfer(approx, guide, params)
                samples.append(time.perf_counter() - t0)
            return statistics.median(samples)

        small, large = median_time(1), median_time(15)
        assert large <= 1.5 * small, (
            f"r=15 median {large * 1e3:.1f} ms vs r=1 {small * 1e3:.1f} ms "
            f"(ratio {large / small:.2f} > 1.5)"
        )
