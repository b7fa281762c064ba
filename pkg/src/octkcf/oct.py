"""Output-constraint-transfer filter update and the response drift gate.

The constrained solution for the dual coefficients is

    F(alpha_t) = (F(y) + 4 lam s F(alpha_{t-1})) / (F(k) + lam + 4 lam s)

which is the same as blending the unconstrained per-frame ridge solution
with the previous filter through the per-frequency weight

    eta = (F(k) + lam) / (F(k) + lam + 4 lam s).
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from octkcf.kcf import ridge_alpha
from octkcf.spectral import DimensionError, cdiv

SIGMA_FLOOR = 1e-6


@dataclass(frozen=True)
class OctConfig:
    s: float = 1000.0
    lam: float = 1e-4
    t_g: float = 1.6

    def __post_init__(self):
        if self.s < 0 or self.lam <= 0 or self.t_g <= 0:
            raise ValueError(f"invalid OCT parameters: {self}")

    @staticmethod
    def rho(t):
        """Running-average rate for frame number t (1-based)."""
        return 1.0 / t


@dataclass(frozen=True)
class ResponseStats:
    """Running Gaussian model of the per-frame peak response."""

    mean: float = 0.0
    variance: float = 0.0
    count: int = 0
    warmup: int = 7

    @property
    def std(self):
        return math.sqrt(self.variance)


def compute_eta(k_spectrum, lam, s):
    if lam <= 0 or s < 0:
        raise ValueError("need lambda > 0 and s >= 0")
    k_spectrum = np.asarray(k_spectrum)
    reg = 4 * lam * s
    # 1 - reg/denominator rather than a ratio: exactly one when s = 0
    return 1.0 - cdiv(np.full_like(k_spectrum, reg), k_spectrum + lam + reg)


def oct_update(prev_alpha, new_alpha, eta):
    prev_alpha = np.asarray(prev_alpha)
    new_alpha = np.asarray(new_alpha)
    eta = np.asarray(eta)
    if not prev_alpha.shape == new_alpha.shape == eta.shape:
        raise DimensionError(
            f"shape mismatch: {prev_alpha.shape}, {new_alpha.shape}, {eta.shape}"
        )
    return eta * new_alpha + (1 - eta) * prev_alpha


def solve_oct_alpha(k_spectrum, y_spectrum, prev_alpha, lam, s):
    k_spectrum = np.asarray(k_spectrum)
    y_spectrum = np.asarray(y_spectrum)
    prev_alpha = np.asarray(prev_alpha)
    if not k_spectrum.shape == y_spectrum.shape == prev_alpha.shape:
        raise DimensionError("k, y and previous alpha spectra must share a shape")
    if lam <= 0 or s < 0:
        raise ValueError("need lambda > 0 and s >= 0")
    reg = 4 * lam * s
    return cdiv(y_spectrum + reg * prev_alpha, k_spectrum + lam + reg)


def solve_oct_alpha_blend(k_spectrum, y_spectrum, prev_alpha, lam, s):
    """Same solution computed as eta-blend of the per-frame ridge filter."""
    eta = compute_eta(k_spectrum, lam, s)
    return oct_update(prev_alpha, ridge_alpha(k_spectrum, y_spectrum, lam), eta)


def stats_update(stats, y_hat):
    """Absorb one peak value with rate 1/(count+1) (Welford recursion)."""
    if not math.isfinite(y_hat):
        raise ValueError(f"non-finite response {y_hat}")
    rho = 1.0 / (stats.count + 1)
    mean = (1 - rho) * stats.mean + rho * y_hat
    variance = (1 - rho) * stats.variance + rho * (y_hat - mean) * (y_hat - stats.mean)
    return replace(stats, mean=mean, variance=max(variance, 0.0), count=stats.count + 1)


def z_score(stats, y_hat, sigma_floor=SIGMA_FLOOR):
    if stats.count == 0:
        return 0.0
    return abs(y_hat - stats.mean) / max(stats.std, sigma_floor)


def is_drifting(stats, y_hat, t_g=1.6, sigma_floor=SIGMA_FLOOR):
    """True when y_hat falls outside the accepted band; never during warmup."""
    if stats.count < stats.warmup:
        return False
    return z_score(stats, y_hat, sigma_floor) >= t_g
