"""2-D DFT helpers and elementwise complex arithmetic.

Convention: forward transform is unnormalized, inverse carries 1/(W*H).
Every function operates on the last two axes, so a stack of channel planes
of shape (C, H, W) is transformed plane by plane.
"""

import numpy as np


class DimensionError(ValueError):
    """Raised for empty, ragged or mismatched planes."""


def as_plane(plane, dtype=float):
    try:
        arr = np.asarray(plane, dtype=dtype)
    except ValueError as exc:  # ragged nested lists
        raise DimensionError(f"plane is not rectangular: {exc}") from None
    if arr.ndim < 2:
        raise DimensionError(f"expected at least 2 dimensions, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError("plane is empty")
    return arr


def fft2(plane):
    """Unnormalized forward DFT over the last two axes."""
    arr = as_plane(plane, dtype=None)
    arr = arr.astype(np.result_type(arr.dtype, float), copy=False)
    return np.fft.fft2(arr, axes=(-2, -1))


def ifft2(sp):
    """Inverse DFT (1/(W*H) normalized), returning the real part."""
    arr = as_plane(sp, dtype=complex)
    return np.fft.ifft2(arr, axes=(-2, -1)).real


def ifft2_complex(sp):
    arr = as_plane(sp, dtype=complex)
    return np.fft.ifft2(arr, axes=(-2, -1))


def _check_same(a, b):
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def cmul(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    _check_same(a, b)
    return a * b


def cdiv(a, b, epsilon=1e-12):
    """Elementwise a / b.

    Only denominators that are exactly 0+0i are replaced by ``epsilon``; callers
    add their own regularizer (e.g. +lambda) to the denominator.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    _check_same(a, b)
    b = np.where(b == 0, epsilon, b)
    return a / b
