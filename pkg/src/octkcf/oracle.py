"""Slow reference implementations used to check the FFT fast paths.

Everything here is written from the definitions: explicit loops, dense
matrices, no FFT. Inputs are capped at MAX_ELEMENTS so a careless test cannot
turn an O(n^2) or O(n^3) routine into a long run.
"""

import cmath
import math

import numpy as np

MAX_ELEMENTS = 64


def _cap(n):
    if n > MAX_ELEMENTS:
        raise ValueError(f"oracle input has {n} elements; cap is {MAX_ELEMENTS}")


def _as_2d(a):
    a = np.asarray(a)
    if a.ndim == 1:
        return a[None, :]
    return a


def naive_dft(plane):
    """Forward 2-D DFT by direct summation."""
    x = _as_2d(plane).astype(complex)
    h, w = x.shape
    _cap(h * w)
    out = np.zeros((h, w), dtype=complex)
    for u in range(h):
        for v in range(w):
            acc = 0j
            for m in range(h):
                for n in range(w):
                    acc += x[m, n] * cmath.exp(-2j * math.pi * (u * m / h + v * n / w))
            out[u, v] = acc
    return out


def naive_idft(spectrum):
    """Inverse 2-D DFT by direct summation, 1/(W*H) normalized."""
    f = _as_2d(spectrum).astype(complex)
    h, w = f.shape
    _cap(h * w)
    out = np.zeros((h, w), dtype=complex)
    for m in range(h):
        for n in range(w):
            acc = 0j
            for u in range(h):
                for v in range(w):
                    acc += f[u, v] * cmath.exp(2j * math.pi * (u * m / h + v * n / w))
            out[m, n] = acc / (h * w)
    return out


def circular_convolution(x, y):
    x = _as_2d(x)
    y = _as_2d(y)
    h, w = x.shape
    _cap(h * w)
    out = np.zeros((h, w), dtype=np.result_type(x, y))
    for i in range(h):
        for j in range(w):
            acc = 0
            for m in range(h):
                for n in range(w):
                    acc += x[m, n] * y[(i - m) % h, (j - n) % w]
            out[i, j] = acc
    return out


def _as_channels(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return x[None, None, :]
    if x.ndim == 2:
        return x[None, :, :]
    return x


def naive_kernel_correlation(x, xp, sigma):
    """Gaussian kernel between ``x`` and every cyclic shift of ``xp``.

    Entry (i, j) is exp(-||x - shift(xp, (i, j))||^2 / (sigma^2 * N)) where
    shift(xp, (i, j))[m, n] = xp[m - i, n - j] and N counts all elements of x
    (channels included). Returns an array shaped like one channel of ``x``.
    """
    xs = _as_channels(x)
    ps = _as_channels(xp)
    if xs.shape != ps.shape:
        raise ValueError(f"shape mismatch: {xs.shape} vs {ps.shape}")
    c, h, w = xs.shape
    _cap(h * w)
    n_total = c * h * w
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            dist = 0.0
            for ch in range(c):
                for m in range(h):
                    for n in range(w):
                        d = xs[ch, m, n] - ps[ch, (m - i) % h, (n - j) % w]
                        dist += d * d
            out[i, j] = math.exp(-dist / (sigma * sigma * n_total))
    return out[0] if np.ndim(x) == 1 else out


def circulant_matrix(base):
    """Dense (block-)circulant matrix whose row i is ``base`` cyclically shifted by i.

    For a 2-D base plane of shape (h, w) the rows and columns are indexed by
    flattened row-major positions and the shift is applied on both axes.
    """
    b = _as_2d(np.asarray(base, dtype=float))
    h, w = b.shape
    _cap(h * w)
    n = h * w
    k = np.zeros((n, n))
    for i1 in range(h):
        for i2 in range(w):
            for j1 in range(h):
                for j2 in range(w):
                    k[i1 * w + i2, j1 * w + j2] = b[(j1 - i1) % h, (j2 - i2) % w]
    return k


def dense_ridge_solve(base_row, y, lam):
    """Solve (K + lam I) alpha = y with K = circulant_matrix(base_row)."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    y = np.asarray(y, dtype=float)
    k = circulant_matrix(base_row)
    a = k + lam * np.eye(k.shape[0])
    try:
        alpha = np.linalg.solve(a, y.ravel())
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular ridge system: {exc}") from None
    return alpha.reshape(y.shape)


def dense_oct_solve(base_row, y, prev_alpha, lam, s):
    """Solve (lam I + 4 lam s I + K) alpha = y + 4 lam s prev_alpha."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if s < 0:
        raise ValueError("s must be non-negative")
    y = np.asarray(y, dtype=float)
    prev = np.asarray(prev_alpha, dtype=float)
    k = circulant_matrix(base_row)
    a = k + (lam + 4 * lam * s) * np.eye(k.shape[0])
    rhs = y.ravel() + 4 * lam * s * prev.ravel()
    try:
        alpha = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular OCT system: {exc}") from None
    return alpha.reshape(y.shape)


def batch_stats(samples):
    """Arithmetic mean and population variance, two-pass."""
    vals = [float(v) for v in samples]
    if not vals:
        raise ValueError("no samples")
    mean = math.fsum(vals) / len(vals)
    var = math.fsum((v - mean) ** 2 for v in vals) / len(vals)
    return mean, var
