import math

import numpy as np
import pytest

from octkcf.features import BoundingBox, FeatureExtractor
from octkcf.kcf import detect, fit
from octkcf.redetect import candidate_peaks, coarse_search, fine_localize, polar_candidates
from octkcf.spectral import fft2
from octkcf.synth import block_target, render
from octkcf.tracker import TrackerConfig, init

FRAME = (200, 200)
TARGET = block_target(32)


def _model_at(center):
    box = BoundingBox.from_center(center, (32, 32))
    state = init(render(FRAME, box, TARGET), box, TrackerConfig())
    return state.model, state.window, FeatureExtractor("fhog", 4)


def test_grid_counts_and_radii():
    grid = polar_candidates((3.0, -2.0), 50.0)
    assert grid.points.shape == (80, 2)
    r = np.hypot(grid.points[:, 0] - 3.0, grid.points[:, 1] + 2.0).reshape(5, 16)
    np.testing.assert_allclose(r, np.repeat(10.0 * np.arange(1, 6)[:, None], 16, axis=1), atol=1e-9)


def test_worked_angles():
    pts = polar_candidates((0.0, 0.0), 50.0, 5, 16).points
    np.testing.assert_allclose(pts[3], (0.0, 10.0), atol=1e-9)  # i_r = 1, i_t = 4
    np.testing.assert_allclose(
        pts[0], (10 * math.cos(3 * math.pi / 16), 10 * math.sin(3 * math.pi / 16)), atol=1e-9
    )
    np.testing.assert_allclose(pts[0], (8.3147, 5.5557), atol=1e-4)


def test_angular_pattern():
    pts = polar_candidates((0.0, 0.0), 5.0, 1, 8).points
    ang = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * np.pi)
    t_s = 2 * np.pi / 8
    i_t = np.arange(1, 9)
    expected = i_t * t_s + np.where(i_t % 2 == 1, t_s / 2, 0.0)
    diff = np.angle(np.exp(1j * (ang - expected)))
    np.testing.assert_allclose(diff, 0.0, atol=1e-9)


@pytest.mark.parametrize("args", [((0, 0), 0.0, 5, 16), ((0, 0), 10.0, 0, 16)])
def test_grid_validation(args):
    with pytest.raises(ValueError):
        polar_candidates(*args)


def test_single_candidate_grid():
    model, window, ext = _model_at((100, 100))
    frame = render(FRAME, BoundingBox.from_center((100, 100), (32, 32)), TARGET)
    grid = polar_candidates((90.0, 100.0), 10.0, 1, 1)
    best, peak = coarse_search(model, frame, grid, window, ext)
    assert best == tuple(grid.points[0])
    assert peak == detect(model, ext(frame, best, window)).peak_value


def test_zero_filter_returns_first_candidate():
    model, window, ext = _model_at((100, 100))
    zero = fit(model.appearance, np.zeros_like(model.label_spectrum), 1e-4, 0.5)
    frame = np.full((200, 200), 0.5)
    grid = polar_candidates((100.0, 100.0), 40.0)
    best, peak = coarse_search(zero, frame, grid, window, ext)
    assert best == tuple(grid.points[0]) and peak == 0.0


def test_candidate_over_target_wins():
    model, window, ext = _model_at((100, 100))
    grid = polar_candidates((100.0, 100.0), 40.0)
    target_center = tuple(grid.points[2 * 16 + 3])  # ring 3, direction 4: straight down
    frame = render(FRAME, BoundingBox.from_center(target_center, (32, 32)), TARGET)
    peaks = candidate_peaks(model, frame, grid, window, ext)
    best, peak = coarse_search(model, frame, grid, window, ext)
    assert best == tuple(grid.points[int(np.argmax(peaks))])
    assert peak == max(peaks)
    assert np.hypot(best[0] - target_center[0], best[1] - target_center[1]) < 1e-9


def test_fine_localize_offsets():
    model, window, ext = _model_at((100, 100))
    centered = render(FRAME, BoundingBox.from_center((100, 100), (32, 32)), TARGET)
    box, _ = fine_localize(model, centered, (100, 100), window, ext, (32, 32))
    assert box.center == (100, 100)
    moved = render(FRAME, BoundingBox.from_center((108, 100), (32, 32)), TARGET)
    box, det = fine_localize(model, moved, (100, 100), window, ext, (32, 32))
    assert det.peak_offset == (2, 0)
    assert box.center == (108, 100)
    left = render(FRAME, BoundingBox.from_center((96, 100), (32, 32)), TARGET)
    box, det = fine_localize(model, left, (100, 100), window, ext, (32, 32))
    assert det.peak_offset == (-1, 0)
    assert int(np.argmax(det.response_map[0])) == det.response_map.shape[1] - 1
    assert box.center == (96, 100)


def test_parallel_map_preserves_result():
    from concurrent.futures import ThreadPoolExecutor

    model, window, ext = _model_at((100, 100))
    frame = render(FRAME, BoundingBox.from_center((110, 92), (32, 32)), TARGET)
    grid = polar_candidates((100.0, 100.0), 32.0)
    with ThreadPoolExecutor(4) as pool:
        par = coarse_search(model, frame, grid, window, ext, map_fn=pool.map)
    assert par == coarse_search(model, frame, grid, window, ext)
