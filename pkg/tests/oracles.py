"""Naive reference implementations used as oracles by the test suite.

Everything here favors obviousness over speed: explicit per-pixel loops,
window slices, and textbook formulas. The library must agree with these
within the tolerances pinned in the tests; none of the fast-path code
(summed-area tables, separable kernels, scipy correlators) is reused.
"""

from __future__ import annotations

import math

import numpy as np


def naive_box_mean(arr: np.ndarray, radius: int) -> np.ndarray:
    """Per-pixel mean over the window clipped to the image (O(N·r²))."""
    h, w = arr.shape
    out = np.empty((h, w))
    for i in range(h):
        top, bottom = max(0, i - radius), min(h, i + radius + 1)
        for j in range(w):
            left, right = max(0, j - radius), min(w, j + radius + 1)
            out[i, j] = arr[top:bottom, left:right].mean()
    return out


def naive_coefficients(
    guide: np.ndarray, approx: np.ndarray, radius: int, epsilon: float
) -> tuple[np.ndarray, np.ndarray]:
    """Per-window ridge regression solved through the 2x2 normal equations.

    Independent of the closed-form slope/offset expressions: builds the
    regularized Gram matrix per window and calls a linear solver.
    """
    h, w = guide.shape
    slope = np.empty((h, w))
    offset = np.empty((h, w))
    for i in range(h):
        top, bottom = max(0, i - radius), min(h, i + radius + 1)
        for j in range(w):
            left, right = max(0, j - radius), min(w, j + radius + 1)
            g = guide[top:bottom, left:right].ravel()
            x = approx[top:bottom, left:right].ravel()
            gram = np.array(
                [[np.mean(g * g) + epsilon, np.mean(g)], [np.mean(g), 1.0]]
            )
            rhs = np.array([np.mean(g * x), np.mean(x)])
            slope[i, j], offset[i, j] = np.linalg.solve(gram, rhs)
    return slope, offset


def naive_guided_transfer(
    approx: np.ndarray, guide: np.ndarray, radius: int, epsilon: float
) -> np.ndarray:
    """Two-pass per-pixel transfer: fit window models, average, evaluate."""
    h, w = guide.shape
    slope = np.empty((h, w))
    offset = np.empty((h, w))
    for i in range(h):
        top, bottom = max(0, i - radius), min(h, i + radius + 1)
        for j in range(w):
            left, right = max(0, j - radius), min(w, j + radius + 1)
            g = guide[top:bottom, left:right]
            x = approx[top:bottom, left:right]
            g_mean = g.mean()
            x_mean = x.mean()
            variance = np.var(g)
            a = ((g * x).mean() - g_mean * x_mean) / (variance + epsilon)
            slope[i, j] = a
            offset[i, j] = x_mean - a * g_mean
    out = naive_box_mean(slope, radius) * guide + naive_box_mean(offset, radius)
    return np.clip(out, 0.0, 1.0)


def naive_block_mean(arr: np.ndarray, sy: int, sx: int) -> np.ndarray:
    h, w = arr.shape[0] // sy, arr.shape[1] // sx
    out = np.empty((h, w))
    for i in range(h):
        for j in range(w):
            out[i, j] = arr[i * sy : (i + 1) * sy, j * sx : (j + 1) * sx].mean()
    return out


def _keys_kernel(d: float) -> float:
    """Catmull-Rom interpolation kernel (a = -1/2), evaluated directly."""
    a = -0.5
    d = abs(d)
    if d <= 1.0:
        return (a + 2.0) * d**3 - (a + 3.0) * d**2 + 1.0
    if d < 2.0:
        return a * (d**3 - 5.0 * d**2 + 8.0 * d - 4.0)
    return 0.0


def naive_bicubic_upscale(arr: np.ndarray, sy: int, sx: int) -> np.ndarray:
    """Direct 4x4 tensor-product interpolation at half-pixel-aligned sites."""
    h, w = arr.shape
    out = np.empty((h * sy, w * sx))
    for oi in range(h * sy):
        y = (oi + 0.5) / sy - 0.5
        iy = math.floor(y)
        for oj in range(w * sx):
            x = (oj + 0.5) / sx - 0.5
            ix = math.floor(x)
            acc = 0.0
            for m in range(-1, 3):
                wy = _keys_kernel(y - (iy + m))
                si = min(max(iy + m, 0), h - 1)
                for n in range(-1, 3):
                    wx = _keys_kernel(x - (ix + n))
                    sj = min(max(ix + n, 0), w - 1)
                    acc += wy * wx * arr[si, sj]
            out[oi, oj] = acc
    return np.clip(out, 0.0, 1.0)


def fsum_mse(a: np.ndarray, b: np.ndarray) -> float:
    """Mean squared error accumulated with compensated summation."""
    diff = (a.ravel() - b.ravel()).tolist()
    return math.fsum(d * d for d in diff) / len(diff)


def naive_psnr(a: np.ndarray, b: np.ndarray) -> float:
    mse = fsum_mse(a, b)
    return math.inf if mse == 0.0 else 10.0 * math.log10(1.0 / mse)


def _gaussian_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    half = size // 2
    coords = np.arange(size) - half
    one_d = np.exp(-(coords**2) / (2.0 * sigma**2))
    window = np.outer(one_d, one_d)
    return window / window.sum()


def naive_ssim(x: np.ndarray, y: np.ndarray) -> float:
    """Sliding 11x11 Gaussian-weighted SSIM, fully-inside windows only."""
    window = _gaussian_window()
    size = window.shape[0]
    c1, c2 = 0.01**2, 0.03**2
    h, w = x.shape
    scores = []
    for i in range(h - size + 1):
        for j in range(w - size + 1):
            wx = x[i : i + size, j : j + size]
            wy = y[i : i + size, j : j + size]
            mx = float((window * wx).sum())
            my = float((window * wy).sum())
            vx = float((window * (wx - mx) ** 2).sum())
            vy = float((window * (wy - my) ** 2).sum())
            cov = float((window * (wx - mx) * (wy - my)).sum())
            scores.append(
                ((2 * mx * my + c1) * (2 * cov + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2))
            )
    return float(np.mean(scores))
