"""Coarse-to-fine re-acquisition around the last known position."""

import math
from dataclasses import dataclass

import numpy as np

from octkcf.features import BoundingBox
from octkcf.kcf import detect


@dataclass(frozen=True)
class PolarGrid:
    center: tuple
    radius: float
    n_r: int
    n_t: int
    points: np.ndarray  # (n_r * n_t, 2) as (x, y), ring-major


def polar_candidates(center, radius, n_r=5, n_t=16):
    """Candidate centers on n_r rings x n_t directions.

    Ring i_r (1..n_r) sits at i_r * radius / n_r. Direction i_t (1..n_t) points
    at angle i_t * 2pi/n_t, with odd i_t rotated by a further half step.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if n_r < 1 or n_t < 1:
        raise ValueError("n_r and n_t must be >= 1")
    x0, y0 = center
    r_s = radius / n_r
    t_s = 2 * math.pi / n_t
    phi = t_s / 2
    pts = []
    for i_r in range(1, n_r + 1):
        for i_t in range(1, n_t + 1):
            ang = i_t * t_s + (phi if i_t % 2 == 1 else 0.0)
            pts.append((x0 + i_r * r_s * math.cos(ang), y0 + i_r * r_s * math.sin(ang)))
    return PolarGrid(center=(x0, y0), radius=radius, n_r=n_r, n_t=n_t, points=np.array(pts))


def candidate_peaks(model, frame, grid, window, extractor, map_fn=map):
    """Peak response of every candidate window, in grid order."""

    def score(pt):
        return detect(model, extractor(frame, tuple(pt), window)).peak_value

    return list(map_fn(score, grid.points))


def coarse_search(model, frame, grid, window, extractor, map_fn=map):
    """Return (best_center, best_response); ties go to the lowest index.

    ``map_fn`` may be a parallel map as long as it preserves order.
    """
    if len(grid.points) == 0:
        raise ValueError("empty candidate grid")
    peaks = candidate_peaks(model, frame, grid, window, extractor, map_fn)
    best = int(np.argmax(peaks))
    return tuple(float(v) for v in grid.points[best]), float(peaks[best])


def fine_localize(model, frame, coarse_center, window, extractor, target_size):
    """One detection pass at ``coarse_center``; returns (box, detection)."""
    det = detect(model, extractor(frame, coarse_center, window))
    dx, dy = det.peak_offset
    cell = extractor.cell_size
    center = (coarse_center[0] + dx * cell, coarse_center[1] + dy * cell)
    return BoundingBox.from_center(center, target_size), det
