"""Full-reference image quality metrics: PSNR and SSIM.

Both metrics operate on the in-memory float representation (peak = 1.0),
never on re-quantized file bytes, so reported numbers are deterministic
and codec-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .image import PlanarImage

_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_SSIM_C1 = 0.01**2
_SSIM_C2 = 0.03**2


@dataclass(frozen=True)
class MetricReport:
    """PSNR (dB, +inf for identical inputs) and SSIM in [-1, 1]."""

    psnr_db: float
    ssim: float


def psnr(a: PlanarImage, b: PlanarImage) -> float:
    """Peak signal-to-noise ratio in dB with peak 1.0.

    Returns math.inf when the images are identical (MSE = 0).
    """
    _check_pair(a, b)
    mse = float(np.mean((a.planes - b.planes) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def ssim(a: PlanarImage, b: PlanarImage) -> float:
    """Mean structural similarity with an 11x11 Gaussian window (sigma 1.5).

    Windows lie fully inside the image (no padding) and the stabilizing
    constants are C1 = 0.01^2, C2 = 0.03^2 on dynamic range 1.0.
    """
    _check_pair(a, b)
    if a.channels != 1:
        raise ValueError(f"ssim expects single-channel images, got {a.channels}")
    if min(a.height, a.width) < _SSIM_WINDOW:
        raise ValueError(
            f"image {a.width}x{a.height} is smaller than the {_SSIM_WINDOW}x{_SSIM_WINDOW} "
            "SSIM window"
        )
    x = a.plane(0)
    y = b.plane(0)
    mu_x = _gaussian_valid(x)
    mu_y = _gaussian_valid(y)
    var_x = _gaussian_valid(x * x) - mu_x * mu_x
    var_y = _gaussian_valid(y * y) - mu_y * mu_y
    cov_xy = _gaussian_valid(x * y) - mu_x * mu_y
    num = (2.0 * mu_x * mu_y + _SSIM_C1) * (2.0 * cov_xy + _SSIM_C2)
    den = (mu_x * mu_x + mu_y * mu_y + _SSIM_C1) * (var_x + var_y + _SSIM_C2)
    return float(np.mean(num / den))


def compare(a: PlanarImage, b: PlanarImage) -> MetricReport:
    """Both metrics for one image pair."""
    return MetricReport(psnr_db=psnr(a, b), ssim=ssim(a, b))


def _gaussian_kernel_1d() -> np.ndarray:
    offsets = np.arange(_SSIM_WINDOW) - (_SSIM_WINDOW - 1) / 2
    g = np.exp(-(offsets**2) / (2.0 * _SSIM_SIGMA**2))
    return g / g.sum()


_KERNEL_1D = _gaussian_kernel_1d()
_MARGIN = (_SSIM_WINDOW - 1) // 2


def _gaussian_valid(arr: np.ndarray) -> np.ndarray:
    """Separable Gaussian-weighted window sums, cropped to full windows."""
    out = correlate1d(arr, _KERNEL_1D, axis=0, mode="constant")
    out = correlate1d(out, _KERNEL_1D, axis=1, mode="constant")
    return out[_MARGIN:-_MARGIN, _MARGIN:-_MARGIN]


def _check_pair(a: PlanarImage, b: PlanarImage) -> None:
    if a.planes.shape != b.planes.shape:
        raise ValueError(
            f"image dimensions differ: {a.width}x{a.height}x{a.channels} vs "
            f"{b.width}x{b.height}x{b.channels}"
        )
