"""In-memory image representation, normalization and lossless file I/O.

Images are carried as channel-planar float64 rasters normalized to [0, 1]
so every filtering kernel can run unchanged on any single plane. File I/O
is restricted to lossless formats (PNG and binary PGM/PPM) because the
benchmark metrics must not be contaminated by codec loss.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np

# Rec. 709 luma weights; they sum to exactly 1.0 in float64.
_LUMA_WEIGHTS = (0.2126, 0.7152, 0.0722)

_PNM_EXTENSIONS = {".pgm", ".ppm"}
_SUPPORTED_EXTENSIONS = {".png"} | _PNM_EXTENSIONS


@dataclass(frozen=True, eq=False)
class PlanarImage:
    """Channel-planar raster of float64 intensities, nominally in [0, 1].

    ``planes`` has shape (channels, height, width) with channels 1 (gray)
    or 3 (RGB). The array is copied on construction and frozen, so
    instances are immutable and safe to share across threads.

    Construction checks shape, channel count and finiteness. The [0, 1]
    range is an invariant maintained by the library's operations (which
    clamp where they can overshoot); `clamp` restores it and `save_image`
    refuses images that violate it.
    """

    planes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.planes, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[np.newaxis, :, :]
        if arr.ndim != 3:
            raise ValueError(f"expected a (channels, height, width) array, got shape {arr.shape}")
        channels, height, width = arr.shape
        if channels not in (1, 3):
            raise ValueError(f"unsupported channel count {channels} (must be 1 or 3)")
        if height < 1 or width < 1:
            raise ValueError(f"image dimensions must be positive, got {width}x{height}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("image contains non-finite values")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "planes", arr)

    @property
    def channels(self) -> int:
        return self.planes.shape[0]

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]

    def plane(self, index: int = 0) -> np.ndarray:
        """Read-only (height, width) view of one channel plane."""
        return self.planes[index]

    @classmethod
    def from_array(cls, array: np.ndarray) -> "PlanarImage":
        """Build from a (H, W) gray or (H, W, 3) interleaved RGB array."""
        arr = np.asarray(array, dtype=np.float64)
        if arr.ndim == 2:
            return cls(arr[np.newaxis, :, :])
        if arr.ndim == 3 and arr.shape[2] == 3:
            return cls(np.moveaxis(arr, 2, 0))
        raise ValueError(f"expected (H, W) or (H, W, 3) array, got shape {arr.shape}")

    def to_array(self) -> np.ndarray:
        """Interleaved copy: (H, W) for gray, (H, W, 3) for RGB."""
        if self.channels == 1:
            return self.planes[0].copy()
        return np.moveaxis(self.planes, 0, 2).copy()


def load_image(path: str | Path) -> PlanarImage:
    """Load an 8- or 16-bit grayscale/RGB PNG, PGM or PPM image.

    Integer sample codes are mapped to [0, 1] by dividing by
    (2**bitdepth - 1); the channel count is preserved.
    """
    path = Path(path)
    ext = path.suffix.lower()
    if ext not in _SUPPORTED_EXTENSIONS:
        raise ValueError(f"unsupported image format {ext!r} for {path} (PNG/PGM/PPM only)")
    if ext in _PNM_EXTENSIONS:
        samples = _read_pnm(path)
    else:
        samples = _read_png(path)
    maxcode = np.iinfo(samples.dtype).max
    arr = samples.astype(np.float64) / maxcode
    if arr.ndim == 2:
        return PlanarImage(arr[np.newaxis, :, :])
    return PlanarImage(np.moveaxis(arr, 2, 0))


def save_image(img: PlanarImage, path: str | Path, bitdepth: int = 16) -> None:
    """Write ``img`` losslessly as PNG, PGM or PPM at the given bit depth.

    Values are quantized by round-half-up of v * (2**bitdepth - 1). The
    image must satisfy the [0, 1] range invariant; clamp it first if a
    filtering step may have overshot.
    """
    if bitdepth not in (8, 16):
        raise ValueError(f"bitdepth must be 8 or 16, got {bitdepth}")
    lo = float(img.planes.min())
    hi = float(img.planes.max())
    if lo < 0.0 or hi > 1.0:
        raise ValueError(
            f"image values outside [0, 1] (min={lo:.6g}, max={hi:.6g}); apply clamp() before saving"
        )
    path = Path(path)
    ext = path.suffix.lower()
    if ext not in _SUPPORTED_EXTENSIONS:
        raise ValueError(f"unsupported image format {ext!r} for {path} (PNG/PGM/PPM only)")
    maxcode = (1 << bitdepth) - 1
    dtype = np.uint8 if bitdepth == 8 else np.uint16
    # floor(x + 0.5) = round-half-up; np.round would round half to even.
    codes = np.floor(img.planes * maxcode + 0.5).astype(dtype)
    if ext in _PNM_EXTENSIONS:
        _write_pnm(codes, path, maxcode)
    else:
        _write_png(codes, path)


def to_gray(img: PlanarImage) -> PlanarImage:
    """Reduce an RGB image to a single luma plane (Rec. 709 weights)."""
    if img.channels != 3:
        raise ValueError(f"to_gray expects a 3-channel image, got {img.channels} channel(s)")
    r, g, b = img.planes
    y = _LUMA_WEIGHTS[0] * r + _LUMA_WEIGHTS[1] * g + _LUMA_WEIGHTS[2] * b
    return PlanarImage(np.clip(y, 0.0, 1.0)[np.newaxis, :, :])


def clamp(img: PlanarImage) -> PlanarImage:
    """Clip every value into [0, 1], leaving dimensions unchanged."""
    return PlanarImage(np.clip(img.planes, 0.0, 1.0))


# ---------------------------------------------------------------------------
# PNG codec (via OpenCV; Pillow silently narrows 16-bit RGB PNGs to 8 bits)

def _read_png(path: Path) -> np.ndarray:
    if not path.is_file():
        raise FileNotFoundError(f"cannot read image file {path}")
    samples = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if samples is None:
        raise ValueError(f"unreadable or corrupt PNG file {path}")
    if samples.dtype not in (np.uint8, np.uint16):
        raise ValueError(f"unsupported PNG sample type {samples.dtype} in {path} (8/16-bit only)")
    if samples.ndim == 2:
        return samples
    if samples.ndim == 3 and samples.shape[2] == 3:
        return samples[:, :, ::-1]  # BGR -> RGB
    raise ValueError(f"unsupported PNG layout {samples.shape} in {path} (no alpha/palette)")


def _write_png(codes: np.ndarray, path: Path) -> None:
    if codes.shape[0] == 1:
        data = codes[0]
    else:
        data = np.moveaxis(codes, 0, 2)[:, :, ::-1]  # RGB -> BGR
    data = np.ascontiguousarray(data)
    if not cv2.imwrite(str(path), data):
        raise OSError(f"failed to write PNG file {path}")


# ---------------------------------------------------------------------------
# Binary PGM (P5) / PPM (P6) codec. Hand-rolled for strict maxval handling;
# 16-bit samples are big-endian per the Netpbm specification.

def _read_pnm(path: Path) -> np.ndarray:
    if not path.is_file():
        raise FileNotFoundError(f"cannot read image file {path}")
    blob = path.read_bytes()
    magic = blob[:2]
    if magic not in (b"P5", b"P6"):
        raise ValueError(f"unsupported PNM magic {magic!r} in {path} (binary P5/P6 only)")
    fields, offset = _parse_pnm_header(blob, path)
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ValueError(f"zero-dimension image {width}x{height} in {path}")
    if maxval not in (255, 65535):
        raise ValueError(f"unsupported PNM maxval {maxval} in {path} (255 or 65535 only)")
    channels = 1 if magic == b"P5" else 3
    dtype = np.dtype(">u2") if maxval == 65535 else np.dtype("u1")
    count = width * height * channels
    payload = blob[offset : offset + count * dtype.itemsize]
    if len(payload) != count * dtype.itemsize:
        raise ValueError(f"truncated PNM payload in {path}")
    samples = np.frombuffer(payload, dtype=dtype).astype(np.uint16 if maxval == 65535 else np.uint8)
    if channels == 1:
        return samples.reshape(height, width)
    return samples.reshape(height, width, 3)


def _parse_pnm_header(blob: bytes, path: Path) -> tuple[tuple[int, int, int], int]:
    # Header = magic + three decimal fields, '#' comments allowed, then a
    # single whitespace byte before the raster.
    pos = 2
    values: list[int] = []
    while len(values) < 3:
        while pos < len(blob) and blob[pos : pos + 1].isspace():
            pos += 1
        if pos < len(blob) and blob[pos : pos + 1] == b"#":
            eol = blob.find(b"\n", pos)
            if eol == -1:
                raise ValueError(f"malformed PNM header in {path}")
            pos = eol + 1
            continue
        match = re.match(rb"\d+", blob[pos : pos + 20])
        if match is None:
            raise ValueError(f"malformed PNM header in {path}")
        values.append(int(match.group()))
        pos += match.end()
    if pos >= len(blob) or not blob[pos : pos + 1].isspace():
        raise ValueError(f"malformed PNM header in {path}")
    pos += 1
    return (values[0], values[1], values[2]), pos


def _write_pnm(codes: np.ndarray, path: Path, maxval: int) -> None:
    channels = codes.shape[0]
    ext = path.suffix.lower()
    if channels == 1 and ext != ".pgm":
        raise ValueError(f"single-channel images must use .pgm, got {path}")
    if channels == 3 and ext != ".ppm":
        raise ValueError(f"three-channel images must use .ppm, got {path}")
    magic = b"P5" if channels == 1 else b"P6"
    height, width = codes.shape[1], codes.shape[2]
    header = magic + f"\n{width} {height}\n{maxval}\n".encode("ascii")
    if channels == 1:
        data = codes[0]
    else:
        data = np.moveaxis(codes, 0, 2)
    if maxval == 65535:
        payload = data.astype(">u2").tobytes()
    else:
        payload = data.astype("u1").tobytes()
    path.write_bytes(header + payload)
