"""Deterministic synthetic multispectral scenes for tests and CI.

Real evaluation data (CAVE, Harvard) cannot be redistributed, so the test
suite and the demos fall back to a small generated dataset with the same
manifest layout. Scenes are piecewise-flat shape collages over smooth
gradients: every band shares the exact same geometry while per-shape
intensities drift across wavelengths, which is the regime a guided
transfer is meant to exploit (aligned edges, band-dependent contrast).

Shapes are rasterized at 4x resolution and block-averaged down, giving
soft anti-aliased edges instead of binary masks. A faint low-frequency
wave with band-dependent phase is mixed in so that no band is an exact
affine function of the others.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .image import PlanarImage, save_image
from .resample import ScaleFactor, downscale

WAVELENGTHS_NM = (450, 550, 650, 950)

_SUPERSAMPLE = 4
_SHAPES_PER_SCENE = 9
_TEXTURE_AMPLITUDE = 0.04


def generate_scene(rng: np.random.Generator, size: int) -> tuple[PlanarImage, PlanarImage]:
    """Render one scene; returns (ground-truth IR band, RGB guide)."""
    bands = _render_bands(rng, size)
    gt = PlanarImage(bands[3])
    # Guide channels are the visible bands, longest wavelength as red.
    guide = PlanarImage(np.stack([bands[2], bands[1], bands[0]]))
    return gt, guide


def _render_bands(rng: np.random.Generator, size: int) -> np.ndarray:
    big = size * _SUPERSAMPLE
    yy, xx = np.mgrid[0:big, 0:big] / float(big)
    n_bands = len(WAVELENGTHS_NM)
    canvas = np.empty((n_bands, big, big))

    # Smooth background gradient, slightly different per band.
    base = rng.uniform(0.25, 0.55)
    gx, gy = rng.uniform(-0.25, 0.25, size=2)
    for b in range(n_bands):
        drift = rng.uniform(-0.08, 0.08)
        canvas[b] = base + drift + gx * xx + gy * yy

    shapes = [_random_shape(rng) for _ in range(_SHAPES_PER_SCENE)]
    for kind, geom in shapes:
        mask = _shape_mask(kind, geom, xx, yy)
        # Per-shape spectrum: a random walk across bands keeps the IR value
        # correlated with, but not identical to, the visible ones.
        level = rng.uniform(0.12, 0.88)
        for b in range(n_bands):
            canvas[b][mask] = level
            level = float(np.clip(level + rng.uniform(-0.15, 0.15), 0.05, 0.95))

    freq = rng.uniform(2.0, 5.0, size=2)
    phase0 = rng.uniform(0.0, 2.0 * np.pi)
    for b in range(n_bands):
        phase = phase0 + 0.3 * b
        canvas[b] += _TEXTURE_AMPLITUDE * np.sin(
            2.0 * np.pi * (freq[0] * xx + freq[1] * yy) + phase
        )

    np.clip(canvas, 0.02, 0.98, out=canvas)
    lowres = downscale(PlanarImage(canvas[:3]), ScaleFactor(_SUPERSAMPLE, _SUPERSAMPLE))
    ir = downscale(PlanarImage(canvas[3]), ScaleFactor(_SUPERSAMPLE, _SUPERSAMPLE))
    return np.concatenate([lowres.planes, ir.planes])


def _random_shape(rng: np.random.Generator):
    if rng.uniform() < 0.5:
        center = rng.uniform(0.1, 0.9, size=2)
        radius = rng.uniform(0.06, 0.22)
        return "disc", (center[0], center[1], radius)
    x0, y0 = rng.uniform(0.0, 0.7, size=2)
    w, h = rng.uniform(0.1, 0.35, size=2)
    return "rect", (x0, y0, x0 + w, y0 + h)


def _shape_mask(kind: str, geom, xx: np.ndarray, yy: np.ndarray) -> np.ndarray:
    if kind == "disc":
        cx, cy, r = geom
        return (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r
    x0, y0, x1, y1 = geom
    return (xx >= x0) & (xx < x1) & (yy >= y0) & (yy < y1)


def generate_dataset(
    root: str | Path,
    *,
    scenes: int = 3,
    size: int = 96,
    seed: int = 20240917,
    name: str = "synthetic",
) -> Path:
    """Write a synthetic dataset under ``root``; returns the manifest path.

    The default 96x96 size is divisible by every benchmark scale factor
    (2, 3, 4, 8 -> lcm 24) and still leaves room for the largest sweep
    radius. The same ``seed`` always produces byte-identical files.
    """
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    manifest_scenes = []
    for i in range(scenes):
        scene_id = f"scene_{i:02d}"
        scene_dir = root / scene_id
        scene_dir.mkdir(exist_ok=True)
        gt, guide = generate_scene(rng, size)
        # The IR band is stored like any other band; the manifest's
        # longest-wavelength entry is what marks it as ground truth.
        band_paths = []
        guide_planes = guide.planes[::-1]  # back to wavelength order B,G,R
        for wl, plane in zip(WAVELENGTHS_NM, (*guide_planes, gt.plane(0))):
            rel = f"{scene_id}/band_{wl:04d}.png"
            save_image(PlanarImage(plane), root / rel, bitdepth=16)
            band_paths.append({"wavelength_nm": wl, "path": rel})
        guide_rel = f"{scene_id}/guide.png"
        save_image(guide, root / guide_rel, bitdepth=16)
        manifest_scenes.append({"id": scene_id, "bands": band_paths, "guide": guide_rel})
    manifest_path = root / "manifest.json"
    manifest_path.write_text(
        json.dumps({"name": name, "root": ".", "scenes": manifest_scenes}, indent=2) + "\n"
    )
    return manifest_path
