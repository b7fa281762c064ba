"""Kernelized correlation filter: Gaussian kernel correlation, training,
detection and the fixed-rate model update."""

from dataclasses import dataclass, replace

import numpy as np

from octkcf.spectral import DimensionError, cdiv, fft2, ifft2


def _channels(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 2:
        return x[None]
    if x.ndim != 3:
        raise DimensionError(f"expected (C, H, W) or (H, W) features, got shape {x.shape}")
    return x


@dataclass(frozen=True)
class FilterModel:
    alpha_hat: np.ndarray  # spectrum of the dual coefficients, (H, W) complex
    appearance: np.ndarray  # learned template x_hat, (C, H, W)
    label_spectrum: np.ndarray
    lam: float
    sigma: float


@dataclass(frozen=True)
class Detection:
    peak_value: float
    peak_offset: tuple  # (dx, dy) signed cyclic shift in cells
    response_map: np.ndarray


def gaussian_correlation(x, xp, sigma):
    """Gaussian kernel of ``x`` against all cyclic shifts of ``xp``.

    k[d] = exp(-max(0, |x|^2 + |xp|^2 - 2 c[d]) / (sigma^2 N)) with the cross
    term c = ifft2(sum_c F(x_c) * conj(F(xp_c))) and N = number of elements.
    """
    x = _channels(x)
    xp = _channels(xp)
    if x.shape != xp.shape:
        raise DimensionError(f"feature shapes differ: {x.shape} vs {xp.shape}")
    if sigma <= 0:
        raise ValueError("kernel sigma must be positive")
    cross = ifft2(np.sum(fft2(x) * np.conj(fft2(xp)), axis=0))
    d = (np.sum(x * x) + np.sum(xp * xp) - 2.0 * cross) / x.size
    return np.exp(-np.maximum(d, 0.0) / sigma**2)


def kernel_spectrum(x, sigma):
    return fft2(gaussian_correlation(x, x, sigma))


def ridge_alpha(k_spectrum, y_spectrum, lam):
    """Per-frame ridge solution F(y) / (F(k) + lambda)."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return cdiv(y_spectrum, k_spectrum + lam)


def train(x, y_spectrum, lam, sigma):
    return ridge_alpha(kernel_spectrum(x, sigma), y_spectrum, lam)


def fit(x, y_spectrum, lam, sigma):
    """Train a fresh model on ``x``."""
    x = _channels(x)
    return FilterModel(
        alpha_hat=train(x, y_spectrum, lam, sigma),
        appearance=x,
        label_spectrum=np.asarray(y_spectrum),
        lam=lam,
        sigma=sigma,
    )


def _signed(i, n):
    return i - n if i > n // 2 else i


def detect(model, z):
    z = _channels(z)
    if z.shape != model.appearance.shape:
        raise DimensionError(
            f"test patch {z.shape} does not match model {model.appearance.shape}"
        )
    kzf = fft2(gaussian_correlation(z, model.appearance, model.sigma))
    response = ifft2(kzf * model.alpha_hat)
    py, px = np.unravel_index(int(np.argmax(response)), response.shape)
    h, w = response.shape
    return Detection(
        peak_value=float(response[py, px]),
        peak_offset=(_signed(int(px), w), _signed(int(py), h)),
        response_map=response,
    )


def kcf_update(model, new_alpha, new_x, rate):
    """Linear interpolation of appearance and filter with a fixed rate."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"learning rate must be in [0, 1], got {rate}")
    new_x = _channels(new_x)
    if new_x.shape != model.appearance.shape or np.shape(new_alpha) != model.alpha_hat.shape:
        raise DimensionError("update shapes do not match the model")
    return replace(
        model,
        appearance=(1.0 - rate) * model.appearance + rate * new_x,
        alpha_hat=(1.0 - rate) * model.alpha_hat + rate * np.asarray(new_alpha),
    )
