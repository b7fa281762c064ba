"""Fast-path vs reference-implementation checks, runnable from the CLI."""

import math

import numpy as np

from octkcf import oracle
from octkcf.kcf import gaussian_correlation, kernel_spectrum, train
from octkcf.oct import (
    ResponseStats,
    compute_eta,
    solve_oct_alpha,
    solve_oct_alpha_blend,
    stats_update,
)
from octkcf.redetect import polar_candidates
from octkcf.spectral import fft2, ifft2

TOL = 1e-8


def _shapes(rng, n_1d=10, n_2d=5):
    for _ in range(n_1d):
        yield (1, int(rng.integers(2, 17)))
    for _ in range(n_2d):
        yield (int(rng.integers(2, 5)), int(rng.integers(2, 5)))


def _label(shape):
    h, w = shape
    yy, xx = np.meshgrid(np.arange(h), np.arange(w), indexing="ij")
    dy = np.minimum(yy, h - yy)
    dx = np.minimum(xx, w - xx)
    return np.exp(-0.5 * (dx**2 + dy**2))


def check_dft(rng):
    err = 0.0
    for _ in range(20):
        p = rng.standard_normal((int(rng.integers(1, 9)), int(rng.integers(1, 9))))
        err = max(err, np.max(np.abs(fft2(p) - oracle.naive_dft(p))))
        err = max(err, np.max(np.abs(ifft2(fft2(p)) - p)))
    return err, 1e-10


def check_kernel(rng):
    err = 0.0
    for _ in range(20):
        c = int(rng.integers(1, 4))
        x, xp = rng.standard_normal((2, c, 4, 4))
        err = max(err, np.max(np.abs(gaussian_correlation(x, xp, 0.5)
                                     - oracle.naive_kernel_correlation(x, xp, 0.5))))
    return err, TOL


def check_ridge(rng):
    err = 0.0
    for shape in _shapes(rng):
        x = rng.standard_normal(shape)
        y = _label(shape)
        fast = ifft2(train(x, fft2(y), 1e-2, 0.5))
        base = gaussian_correlation(x, x, 0.5)
        dense = oracle.dense_ridge_solve(base, y, 1e-2).reshape(shape)
        err = max(err, np.max(np.abs(fast - dense)))
    return err, TOL


def check_oct(rng):
    err = 0.0
    for shape in _shapes(rng):
        x = rng.standard_normal(shape)
        y = _label(shape)
        prev = rng.standard_normal(shape)
        base = gaussian_correlation(x, x, 0.5)
        for s in (0.0, 1.0, 1000.0):
            fast = ifft2(solve_oct_alpha(fft2(base), fft2(y), fft2(prev), 1e-2, s))
            dense = oracle.dense_oct_solve(base, y, prev, 1e-2, s).reshape(shape)
            err = max(err, np.max(np.abs(fast - dense)))
    return err, TOL


def check_oct_paths(rng):
    err = 0.0
    for shape in _shapes(rng):
        x = rng.standard_normal(shape)
        kf = kernel_spectrum(x, 0.5)
        yf = fft2(_label(shape))
        prev = fft2(rng.standard_normal(shape))
        for s in (0.0, 1.0, 1000.0):
            a = solve_oct_alpha(kf, yf, prev, 1e-4, s)
            b = solve_oct_alpha_blend(kf, yf, prev, 1e-4, s)
            err = max(err, np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a))))
    return err, 1e-12


def check_degeneration(rng):
    err = 0.0
    shape = (4, 4)
    prev = fft2(rng.standard_normal(shape))
    for _ in range(10):
        x = rng.standard_normal(shape)
        kf = kernel_spectrum(x, 0.5)
        yf = fft2(_label(shape))
        err = max(err, np.max(np.abs(compute_eta(kf, 1e-4, 0.0) - 1.0)))
        err = max(err, np.max(np.abs(solve_oct_alpha(kf, yf, prev, 1e-4, 0.0)
                                     - train(x, yf, 1e-4, 0.5))))
        prev = solve_oct_alpha(kf, yf, prev, 1e-4, 0.0)
    return err, 0.0


def check_stats(rng):
    samples = rng.normal(3.0, 2.0, 1000)
    stats = ResponseStats()
    for v in samples:
        stats = stats_update(stats, float(v))
    mean, var = oracle.batch_stats(samples)
    return max(abs(stats.mean - mean), abs(stats.variance - var)), 1e-9


def check_polar(rng):
    grid = polar_candidates((0.0, 0.0), 50.0, 5, 16)
    if len(grid.points) != 80:
        return math.inf, 0.0
    radii = np.hypot(grid.points[:, 0], grid.points[:, 1]).reshape(5, 16)
    return float(np.max(np.abs(radii - 10.0 * np.arange(1, 6)[:, None]))), 1e-9


CHECKS = {
    "dft": check_dft,
    "kernel-correlation": check_kernel,
    "ridge-dense": check_ridge,
    "oct-dense": check_oct,
    "oct-blend-identity": check_oct_paths,
    "s0-degeneration": check_degeneration,
    "running-stats": check_stats,
    "polar-grid": check_polar,
}


def run(emit=print, seed=0):
    """Run every check; returns True when all pass."""
    rng = np.random.default_rng(seed)
    ok = True
    for name, check in CHECKS.items():
        err, tol = check(rng)
        passed = bool(err <= tol)
        ok &= passed
        emit(f"{'PASS' if passed else 'FAIL'} {name}: max error {err:.3g} (tol {tol:g})")
    return ok
