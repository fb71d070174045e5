"""Grayscale image files, noise injection, and weight-map heatmaps.

Binary PGM (P5) is the canonical format: byte-exact round trips with no
compression variability.  PNG (and anything else Pillow can open) is accepted
on input as long as it is single channel.  Loaded intensities are divided by
the full range of their bit depth so grids always land in [0, 1]; written
images use 8 bits with round-half-away-from-zero.
"""

from __future__ import annotations

import numpy as np

from .errors import ImageFormatError, ParameterError
from .grid import Array, as_unit_grid

MAXVAL_8 = 255
MAXVAL_16 = 65535


def _read_pgm_tokens(data: bytes, count: int, pos: int) -> tuple[list, int]:
    """Read whitespace-separated integer tokens, skipping '#' comments."""
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":
            while pos < n and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageFormatError("truncated PGM header")
        try:
            tokens.append(int(data[start:pos]))
        except ValueError as exc:
            raise ImageFormatError(f"bad PGM header token {data[start:pos]!r}") from exc
    return tokens, pos


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Read a binary PGM file; returns (integer samples [h, w], maxval)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ImageFormatError("not a binary PGM (P5) file")
    (width, height, maxval), pos = _read_pgm_tokens(data, 3, 2)
    if width < 1 or height < 1 or not (0 < maxval <= MAXVAL_16):
        raise ImageFormatError(f"bad PGM dimensions {width}x{height} maxval {maxval}")
    pos += 1  # single whitespace byte after maxval
    dtype = np.dtype(">u2") if maxval > MAXVAL_8 else np.dtype("u1")
    expected = width * height * dtype.itemsize
    raster = data[pos : pos + expected]
    if len(raster) != expected:
        raise ImageFormatError("truncated PGM raster")
    samples = np.frombuffer(raster, dtype=dtype).reshape(height, width)
    return samples.astype(np.uint16 if maxval > MAXVAL_8 else np.uint8), maxval


def write_pgm(path, samples: np.ndarray, maxval: int = MAXVAL_8) -> None:
    """Write integer samples as binary PGM; 2-byte big-endian above 255."""
    samples = np.asarray(samples)
    if samples.ndim != 2:
        raise ParameterError(f"samples must be 2-D, got shape {samples.shape}")
    height, width = samples.shape
    header = f"P5\n{width} {height}\n{maxval}\n".encode("ascii")
    dtype = np.dtype(">u2") if maxval > MAXVAL_8 else np.dtype("u1")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(samples.astype(dtype).tobytes())


def _load_with_pillow(path) -> tuple[np.ndarray, int]:
    from PIL import Image, UnidentifiedImageError

    try:
        img = Image.open(path)
        img.load()
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"unsupported image file: {path}") from exc
    if img.mode == "1":
        img = img.convert("L")
    if img.mode == "L":
        return np.asarray(img, dtype=np.uint8), MAXVAL_8
    if img.mode in ("I;16", "I;16B", "I"):
        return np.asarray(img, dtype=np.uint32).astype(np.uint16), MAXVAL_16
    raise ImageFormatError(
        f"only single-channel grayscale images are supported, got mode {img.mode!r}"
    )


def load_image(path) -> Array:
    """Load a grayscale image as a unit-range grid.

    Samples are divided by the full range of the bit depth (255 or 65535).
    Multi-channel inputs are rejected.
    """
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"P5":
        samples, maxval = read_pgm(path)
    else:
        samples, maxval = _load_with_pillow(path)
    depth_max = MAXVAL_16 if maxval > MAXVAL_8 else MAXVAL_8
    return samples.astype(np.float64) / depth_max


def _quantize_unit(u: Array) -> np.ndarray:
    # round half away from zero; u is nonnegative so floor(x + 0.5) suffices
    return np.floor(np.clip(u, 0.0, 1.0) * MAXVAL_8 + 0.5).astype(np.uint8)


def save_image(u: Array, path) -> None:
    """Write a unit-range grid as an 8-bit binary PGM."""
    write_pgm(path, _quantize_unit(as_unit_grid(u)), MAXVAL_8)


def save_mask(mask, path) -> None:
    """Write a binary mask as PGM: foreground 255, background 0."""
    mask = np.asarray(mask)
    write_pgm(path, np.where(mask.astype(bool), MAXVAL_8, 0).astype(np.uint8), MAXVAL_8)


def load_mask(path) -> np.ndarray:
    """Load a black/white mask image as a boolean grid."""
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"P5":
        samples, maxval = read_pgm(path)
    else:
        samples, maxval = _load_with_pillow(path)
    return samples > (maxval // 2)


def add_gaussian_noise(u: Array, sigma_255: float, seed: int) -> Array:
    """Add zero-mean Gaussian noise quoted on the 0-255 scale, then clamp.

    The standard deviation is divided by 255 to match unit-range grids.  The
    generator is seeded, so equal seeds give bit-identical output.
    """
    if sigma_255 < 0:
        raise ParameterError(f"sigma must be nonnegative, got {sigma_255}")
    u = as_unit_grid(u)
    rng = np.random.default_rng(seed)
    noisy = u + rng.normal(0.0, sigma_255 / MAXVAL_8, size=u.shape)
    return np.clip(noisy, 0.0, 1.0)


def save_lambda_heatmap(lam: Array, bounds: tuple, path) -> None:
    """Write a weight map as an 8-bit grayscale heatmap.

    Entries are mapped affinely: lambda_min to black, lambda_max to white,
    values outside the bounds clamped.
    """
    lo, hi = bounds
    if not (0 < lo < hi):
        raise ParameterError(f"need 0 < lambda_min < lambda_max, got ({lo}, {hi})")
    unit = np.clip((np.asarray(lam, dtype=np.float64) - lo) / (hi - lo), 0.0, 1.0)
    write_pgm(path, _quantize_unit(unit), MAXVAL_8)
