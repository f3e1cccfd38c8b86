"""Guided local-linear transfer of structure from an RGB guide to an IR image.

Every output pixel is modeled as an affine function of the guide inside a
square window of radius r; the per-window slope and offset come from a
closed-form ridge regression against the upscaled IR image, and the
coefficients of all windows overlapping a pixel are averaged before the
final evaluation. All window statistics are computed with summed-area
tables, so the cost is O(N) regardless of the radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .image import PlanarImage, to_gray
from .resample import ScaleFactor, upscale_bicubic

#: Upscaler identifiers accepted by the built-in parameter table. "external"
#: covers pre-upscaled approximations produced outside this library (e.g. by
#: a pretrained super-resolution network) and fed in as files.
UPSCALER_IDS = ("bicubic", "external")


@dataclass(frozen=True)
class FilterParams:
    """Transfer-function parameters: window radius and ridge regularization.

    ``radius`` r defines a square window of side 2r + 1 centered on each
    pixel; ``epsilon`` penalizes large slopes (it is applied to images
    normalized to [0, 1], so it is dimensionless and size-independent).
    """

    radius: int
    epsilon: float

    def __post_init__(self) -> None:
        if not isinstance(self.radius, int) or self.radius < 0:
            raise ValueError(f"radius must be a non-negative integer, got {self.radius!r}")
        if not (self.epsilon > 0.0):
            raise ValueError(f"epsilon must be > 0, got {self.epsilon!r}")


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """Per-pixel slope/offset of the local linear model (guide -> output).

    Both fields have the guide's spatial dimensions. Slopes are zero
    wherever the guide window is constant; offsets then reduce to plain
    window means. Values may legitimately leave [0, 1].
    """

    slope: np.ndarray = field(repr=False)
    offset: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        slope = np.asarray(self.slope, dtype=np.float64)
        offset = np.asarray(self.offset, dtype=np.float64)
        if slope.ndim != 2 or slope.shape != offset.shape:
            raise ValueError(
                f"slope/offset must be matching 2-D fields, got {slope.shape} and {offset.shape}"
            )
        for arr in (slope, offset):
            arr.setflags(write=False)
        object.__setattr__(self, "slope", slope)
        object.__setattr__(self, "offset", offset)

    @property
    def height(self) -> int:
        return self.slope.shape[0]

    @property
    def width(self) -> int:
        return self.slope.shape[1]


@dataclass(frozen=True)
class ParamTable:
    """Radius lookup per (scale, upscaler id) with one shared epsilon."""

    radii: dict[tuple[int, int, str], int]
    epsilon: float

    def lookup(self, scale: ScaleFactor, upscaler: str) -> FilterParams:
        if upscaler not in UPSCALER_IDS:
            raise ValueError(f"unknown upscaler {upscaler!r}, expected one of {UPSCALER_IDS}")
        key = (scale.sx, scale.sy, upscaler)
        if key not in self.radii:
            supported = sorted({f"{sx}x{sy}" for sx, sy, _ in self.radii})
            raise ValueError(
                f"no built-in radius for scale {scale} with upscaler {upscaler!r}; "
                f"supported scales are {', '.join(supported)} (pass an explicit radius instead)"
            )
        return FilterParams(radius=self.radii[key], epsilon=self.epsilon)


#: Built-in radii, tuned per scale and per upscaler; epsilon is fixed at 1e-4.
DEFAULT_PARAMS = ParamTable(
    radii={
        (2, 2, "bicubic"): 1,
        (3, 3, "bicubic"): 3,
        (4, 4, "bicubic"): 6,
        (8, 8, "bicubic"): 15,
        (2, 2, "external"): 2,
        (3, 3, "external"): 3,
        (4, 4, "external"): 4,
        (8, 8, "external"): 15,
    },
    epsilon=1e-4,
)


def lookup_params(scale: ScaleFactor, upscaler: str = "bicubic") -> FilterParams:
    """Built-in (radius, epsilon) for a supported scale and upscaler id."""
    return DEFAULT_PARAMS.lookup(scale, upscaler)


# ---------------------------------------------------------------------------
# Box means via summed-area tables

def _check_window(radius: int, height: int, width: int) -> None:
    side = 2 * radius + 1
    if side > min(height, width):
        raise ValueError(
            f"window side {side} (radius {radius}) exceeds image size {width}x{height}"
        )


def _box_mean_array(arr: np.ndarray, radius: int) -> np.ndarray:
    """Mean over the (truncated) square window around every pixel, O(1)/pixel.

    Windows are clipped to the image at the borders and the divisor shrinks
    with them, so constants are preserved exactly everywhere.
    """
    if radius == 0:
        # Single-pixel windows: identity. Bypassing the table avoids
        # cancellation noise that the ridge division would amplify.
        return arr.astype(np.float64, copy=True)
    h, w = arr.shape
    sat = np.zeros((h + 1, w + 1))
    sat[1:, 1:] = np.cumsum(np.cumsum(arr, axis=0), axis=1)
    i = np.arange(h)
    j = np.arange(w)
    top = np.maximum(i - radius, 0)
    bottom = np.minimum(i + radius, h - 1) + 1
    left = np.maximum(j - radius, 0)
    right = np.minimum(j + radius, w - 1) + 1
    sums = (
        sat[bottom[:, None], right[None, :]]
        - sat[top[:, None], right[None, :]]
        - sat[bottom[:, None], left[None, :]]
        + sat[top[:, None], left[None, :]]
    )
    counts = (bottom - top)[:, None] * (right - left)[None, :]
    return sums / counts


def box_mean(img: PlanarImage, radius: int) -> PlanarImage:
    """Sliding-window mean of a single-channel image (truncated borders)."""
    if img.channels != 1:
        raise ValueError(f"box_mean expects a single-channel image, got {img.channels}")
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius}")
    _check_window(radius, img.height, img.width)
    return PlanarImage(_box_mean_array(img.plane(0), radius)[np.newaxis, :, :])


# ---------------------------------------------------------------------------
# Ridge-regression coefficients and their overlap averaging

def _compute_coefficients_arrays(
    guide: np.ndarray, approx: np.ndarray, params: FilterParams
) -> tuple[np.ndarray, np.ndarray]:
    r = params.radius
    guide_mean = _box_mean_array(guide, r)
    approx_mean = _box_mean_array(approx, r)
    cross_mean = _box_mean_array(guide * approx, r)
    square_mean = _box_mean_array(guide * guide, r)
    # mean-of-squares minus square-of-mean can dip to ~-1e-17 in float64;
    # flooring keeps the constant-guide slope exactly zero.
    variance = np.maximum(square_mean - guide_mean * guide_mean, 0.0)
    slope = (cross_mean - guide_mean * approx_mean) / (variance + params.epsilon)
    offset = approx_mean - slope * guide_mean
    return slope, offset


def compute_coefficients(
    guide: PlanarImage, approx: PlanarImage, params: FilterParams
) -> CoefficientField:
    """Per-window ridge fit of the approximation against the guide.

    For every pixel the slope is cov(guide, approx) / (var(guide) + epsilon)
    over its window and the offset completes the least-squares line through
    the window means.
    """
    _check_inputs(guide, approx)
    _check_window(params.radius, guide.height, guide.width)
    slope, offset = _compute_coefficients_arrays(guide.plane(0), approx.plane(0), params)
    return CoefficientField(slope, offset)


def average_coefficients(coeffs: CoefficientField, radius: int) -> CoefficientField:
    """Average each coefficient over all windows that overlap a pixel.

    Window symmetry turns "all windows containing k" into the plain box
    mean centered at k; borders use the same truncated windows as
    `box_mean`.
    """
    if radius < 0:
        raise ValueError(f"radius must be non-negative, got {radius}")
    _check_window(radius, coeffs.height, coeffs.width)
    return CoefficientField(
        _box_mean_array(coeffs.slope, radius),
        _box_mean_array(coeffs.offset, radius),
    )


def guided_transfer(approx: PlanarImage, guide: PlanarImage, params: FilterParams) -> PlanarImage:
    """Transfer the guide's structure onto the approximation.

    Composition of `compute_coefficients`, `average_coefficients` and the
    pointwise evaluation averaged-slope * guide + averaged-offset. Only the
    final result is clamped to [0, 1]; clamping intermediates would bias
    the coefficient averaging.
    """
    _check_inputs(guide, approx)
    _check_window(params.radius, guide.height, guide.width)
    g = guide.plane(0)
    slope, offset = _compute_coefficients_arrays(g, approx.plane(0), params)
    slope = _box_mean_array(slope, params.radius)
    offset = _box_mean_array(offset, params.radius)
    return PlanarImage(np.clip(slope * g + offset, 0.0, 1.0)[np.newaxis, :, :])


def girre_enhance(
    lr_ir: PlanarImage,
    guide_rgb: PlanarImage,
    scale: ScaleFactor,
    params: FilterParams,
    approx_override: PlanarImage | None = None,
) -> PlanarImage:
    """Full enhancement pipeline: upscale the IR image, then guided transfer.

    ``approx_override``, when given, replaces the built-in bicubic upscale
    with an externally produced approximation (already at guide size); this
    is the hook for neural upscalers whose outputs arrive as files.
    """
    if lr_ir.channels != 1:
        raise ValueError(f"expected a single-channel IR image, got {lr_ir.channels} channels")
    expected_w = lr_ir.width * scale.sx
    expected_h = lr_ir.height * scale.sy
    if (guide_rgb.width, guide_rgb.height) != (expected_w, expected_h):
        raise ValueError(
            f"guide is {guide_rgb.width}x{guide_rgb.height} but expected "
            f"{expected_w}x{expected_h} (IR {lr_ir.width}x{lr_ir.height} times scale {scale})"
        )
    if approx_override is not None:
        if approx_override.channels != 1:
            raise ValueError("approximation override must be single-channel")
        if (approx_override.width, approx_override.height) != (expected_w, expected_h):
            raise ValueError(
                f"approximation override is {approx_override.width}x{approx_override.height} "
                f"but expected {expected_w}x{expected_h} (guide size)"
            )
        approx = approx_override
    else:
        approx = upscale_bicubic(lr_ir, scale)
    guide_scalar = to_gray(guide_rgb)
    return guided_transfer(approx, guide_scalar, params)


def _check_inputs(guide: PlanarImage, approx: PlanarImage) -> None:
    if guide.channels != 1 or approx.channels != 1:
        raise ValueError("guide and approximation must both be single-channel")
    if guide.planes.shape != approx.planes.shape:
        raise ValueError(
            f"guide {guide.width}x{guide.height} and approximation "
            f"{approx.width}x{approx.height} dimensions differ"
        )
