"""Patch extraction and feature maps.

Images are float arrays of shape (H, W) with values in [0, 1]. Feature patches
are float arrays of shape (C, H_cells, W_cells).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from PIL import Image

HOG_ORIENTATIONS = 9
HOG_CLIP = 0.2
HOG_TEXTURE_WEIGHT = 0.2357
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box; (x, y) is the top-left corner in pixels."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise ValueError(f"box size must be positive, got w={self.w}, h={self.h}")

    @property
    def center(self):
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    @classmethod
    def from_center(cls, center, size):
        cx, cy = center
        w, h = size
        return cls(cx - w / 2.0, cy - h / 2.0, w, h)

    def clamped(self, width, height):
        """Shift the box so it lies inside a width x height frame.

        A box larger than the frame along an axis is centered on that axis.
        """
        x = _clamp_span(self.x, self.w, width)
        y = _clamp_span(self.y, self.h, height)
        return BoundingBox(x, y, self.w, self.h)

    def as_tuple(self):
        return (self.x, self.y, self.w, self.h)


def _clamp_span(start, length, limit):
    if length >= limit:
        return (limit - length) / 2.0
    return min(max(start, 0.0), limit - length)


# -- image ingestion ---------------------------------------------------------


def to_gray(pixels):
    """Convert an 8-bit gray or RGB(A) array to a float image in [0, 1]."""
    arr = np.asarray(pixels)
    if arr.ndim == 3:
        arr = arr[..., :3].astype(float) @ np.asarray(LUMA_WEIGHTS)
    elif arr.ndim != 2:
        raise ValueError(f"unsupported image shape {arr.shape}")
    if np.issubdtype(np.asarray(pixels).dtype, np.integer):
        arr = arr / 255.0
    return np.clip(np.asarray(arr, dtype=float), 0.0, 1.0)


def load_gray(path):
    with Image.open(path) as im:
        if im.mode not in ("L", "RGB", "RGBA"):
            im = im.convert("RGB")
        pixels = np.asarray(im)
    return to_gray(pixels)


# -- windows -----------------------------------------------------------------


def extract_subwindow(img, center, size):
    """Crop a (w, h) window centered at ``center`` with border replication."""
    w, h = int(size[0]), int(size[1])
    if w <= 0 or h <= 0:
        raise ValueError(f"window size must be positive, got {size}")
    img = np.asarray(img)
    cx, cy = center
    xs = math.floor(cx) - w // 2 + np.arange(w)
    ys = math.floor(cy) - h // 2 + np.arange(h)
    xs = np.clip(xs, 0, img.shape[1] - 1)
    ys = np.clip(ys, 0, img.shape[0] - 1)
    return img[np.ix_(ys, xs)]


def window_size(target_size, search_scale, cell_size):
    """Search window in pixels, rounded up to a whole number of cells."""
    return tuple(
        int(cell_size * math.ceil(search_scale * t / cell_size - 1e-9)) for t in target_size
    )


def hann1d(n):
    if n < 1:
        raise ValueError("window length must be >= 1")
    if n == 1:
        return np.ones(1)
    i = np.arange(n)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * i / (n - 1)))


def hann2d(w, h):
    """Outer product of 1-D Hann windows, shape (h, w)."""
    return np.outer(hann1d(h), hann1d(w))


def make_label(w, h, bandwidth):
    """Gaussian regression target with its peak (value 1) at bin (0, 0).

    Offsets wrap around so the label is the circularly shifted Gaussian.
    """
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    dy = (np.arange(h) + h // 2) % h - h // 2
    dx = (np.arange(w) + w // 2) % w - w // 2
    d2 = dy[:, None] ** 2 + dx[None, :] ** 2
    return np.exp(-0.5 * d2 / bandwidth**2)


# -- FHOG --------------------------------------------------------------------


def _gradients(img):
    gx = np.zeros_like(img)
    gy = np.zeros_like(img)
    if img.shape[1] > 1:
        gx[:, 1:-1] = (img[:, 2:] - img[:, :-2]) / 2.0
        gx[:, 0] = img[:, 1] - img[:, 0]
        gx[:, -1] = img[:, -1] - img[:, -2]
    if img.shape[0] > 1:
        gy[1:-1, :] = (img[2:, :] - img[:-2, :]) / 2.0
        gy[0, :] = img[1, :] - img[0, :]
        gy[-1, :] = img[-1, :] - img[-2, :]
    return gx, gy


def _bilinear_cells(n_pixels, cell_size):
    pos = (np.arange(n_pixels) + 0.5) / cell_size - 0.5
    c0 = np.floor(pos).astype(int)
    w1 = pos - c0
    return c0, 1.0 - w1, w1


def gradient_histogram(img, cell_size, n_bins=2 * HOG_ORIENTATIONS):
    """Unnormalized per-cell histograms of contrast-sensitive gradient orientation.

    Orientation is hard-assigned to the nearest of ``n_bins`` bins over
    [0, 2*pi); magnitude is spread bilinearly over the neighbouring cells and
    scaled by 1/cell_size^2. Returns shape (H_cells, W_cells, n_bins).
    """
    img = np.asarray(img, dtype=float)
    nby, nbx = img.shape[0] // cell_size, img.shape[1] // cell_size
    if nby < 1 or nbx < 1:
        raise ValueError(f"image {img.shape} is smaller than one {cell_size}px cell")
    gx, gy = _gradients(img)
    gx = gx[: nby * cell_size, : nbx * cell_size]
    gy = gy[: nby * cell_size, : nbx * cell_size]
    mag = np.hypot(gx, gy) / cell_size**2
    ang = np.mod(np.arctan2(gy, gx), 2 * np.pi)
    o = np.rint(ang * n_bins / (2 * np.pi)).astype(int) % n_bins

    cy0, wy0, wy1 = _bilinear_cells(gx.shape[0], cell_size)
    cx0, wx0, wx1 = _bilinear_cells(gx.shape[1], cell_size)
    idx, wts = [], []
    for cy, wy in ((cy0, wy0), (cy0 + 1, wy1)):
        for cx, wx in ((cx0, wx0), (cx0 + 1, wx1)):
            ok = ((cy >= 0) & (cy < nby))[:, None] & ((cx >= 0) & (cx < nbx))[None, :]
            flat = (cy[:, None] * nbx + cx[None, :]) * n_bins + o
            idx.append(flat[ok])
            wts.append((mag * wy[:, None] * wx[None, :])[ok])
    hist = np.bincount(
        np.concatenate(idx), weights=np.concatenate(wts), minlength=nby * nbx * n_bins
    )
    return hist.reshape(nby, nbx, n_bins)


def fhog(img, cell_size=4):
    """31-channel Felzenszwalb HOG: 18 signed, 9 unsigned, 4 texture channels.

    Returns shape (31, H // cell_size, W // cell_size).
    """
    r1 = gradient_histogram(img, cell_size, 2 * HOG_ORIENTATIONS)
    r2 = r1[..., :HOG_ORIENTATIONS] + r1[..., HOG_ORIENTATIONS:]
    nby, nbx = r1.shape[:2]

    energy = np.zeros((nby + 2, nbx + 2))
    energy[1:-1, 1:-1] = np.sum(r2**2, axis=-1)
    blocks = energy[:-1, :-1] + energy[1:, :-1] + energy[:-1, 1:] + energy[1:, 1:]
    eps = 1e-4 / 4 / cell_size**4
    inv = 1.0 / np.sqrt(blocks + eps)
    norms = np.stack(
        [inv[:-1, :-1], inv[:-1, 1:], inv[1:, :-1], inv[1:, 1:]], axis=-1
    )  # (nby, nbx, 4)

    clipped1 = np.minimum(r1[..., :, None] * norms[..., None, :], HOG_CLIP)
    clipped2 = np.minimum(r2[..., :, None] * norms[..., None, :], HOG_CLIP)
    signed = 0.5 * clipped1.sum(axis=-1)
    unsigned = 0.5 * clipped2.sum(axis=-1)
    texture = HOG_TEXTURE_WEIGHT * clipped1.sum(axis=-2)
    feats = np.concatenate([signed, unsigned, texture], axis=-1)
    return np.ascontiguousarray(np.moveaxis(feats, -1, 0))


def gray_features(img):
    """Single mean-subtracted intensity channel, cell size 1."""
    img = np.asarray(img, dtype=float)
    return (img - img.mean())[None, :, :]


@lru_cache(maxsize=16)
def _cached_hann(w, h):
    win = hann2d(w, h)
    win.flags.writeable = False
    return win


@dataclass(frozen=True)
class FeatureExtractor:
    mode: str = "fhog"
    cell_size: int = 4

    def __post_init__(self):
        if self.mode not in ("fhog", "gray"):
            raise ValueError(f"unknown feature mode {self.mode!r}")
        if self.mode == "gray" and self.cell_size != 1:
            raise ValueError("gray features use cell_size 1")

    def grid(self, window):
        return window[0] // self.cell_size, window[1] // self.cell_size

    def __call__(self, img, center, window):
        patch = extract_subwindow(img, center, window)
        if self.mode == "fhog":
            feats = fhog(patch, self.cell_size)
        else:
            feats = gray_features(patch)
        return feats * _cached_hann(feats.shape[2], feats.shape[1])
