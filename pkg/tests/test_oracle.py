import numpy as np
import pytest

from octkcf import oracle
from octkcf.spectral import fft2


def test_naive_dft_of_impulse_is_ones():
    p = np.zeros((3, 4))
    p[0, 0] = 1.0
    np.testing.assert_allclose(oracle.naive_dft(p), np.ones((3, 4)), atol=1e-14)


def test_naive_dft_inverse_round_trip(rng):
    p = rng.standard_normal((4, 4))
    np.testing.assert_allclose(oracle.naive_idft(oracle.naive_dft(p)).real, p, atol=1e-12)


def test_kernel_correlation_of_zeros_is_ones():
    np.testing.assert_array_equal(oracle.naive_kernel_correlation(np.zeros((3, 3)), np.zeros((3, 3)), 0.5), 1.0)


def test_batch_stats_hand_values():
    mean, var = oracle.batch_stats([1, 2, 3])
    assert mean == 2.0
    assert var == pytest.approx(2 / 3, abs=1e-15)


def test_identity_kernel_halves_target(rng):
    base = np.zeros(6)
    base[0] = 1.0
    y = rng.standard_normal(6)
    np.testing.assert_allclose(oracle.dense_ridge_solve(base, y, 1.0), y / 2, atol=1e-14)


def test_all_ones_kernel_residual():
    base = np.ones(4)
    y = np.array([1.0, 0, 0, 0])
    alpha = oracle.dense_ridge_solve(base, y, 1.0)
    k = oracle.circulant_matrix(base)
    assert np.linalg.norm((k + np.eye(4)) @ alpha - y) < 1e-12


def test_circulant_rows_are_shifts_and_product_is_convolution(rng):
    base = rng.standard_normal(5)
    k = oracle.circulant_matrix(base)
    for i in range(5):
        np.testing.assert_array_equal(k[i], np.roll(base, i))
    v = rng.standard_normal(5)
    # K v [i] = sum_j b[j - i] v[j]: correlation, i.e. convolution with the reversed base
    expected = np.array([sum(base[(j - i) % 5] * v[j] for j in range(5)) for i in range(5)])
    np.testing.assert_allclose(k @ v, expected, atol=1e-12)
    flipped = np.roll(base[::-1], 1)
    np.testing.assert_allclose(oracle.circular_convolution(flipped, v)[0], expected, atol=1e-12)


def test_circulant_matrix_2d_block_structure(rng):
    base = rng.standard_normal((2, 3))
    k = oracle.circulant_matrix(base)
    np.testing.assert_array_equal(k[0], base.ravel())
    # constant diagonals under cyclic indexing
    for i in range(6):
        for j in range(6):
            di = ((j // 3) - (i // 3)) % 2, ((j % 3) - (i % 3)) % 3
            assert k[i, j] == base[di]


def test_oct_solve_degenerates_and_tends_to_previous(rng):
    base = np.exp(-np.minimum(np.arange(8), 8 - np.arange(8)) ** 2 / 4.0)
    y = rng.standard_normal(8)
    prev = oracle.dense_ridge_solve(base, y, 1e-2)
    np.testing.assert_allclose(oracle.dense_oct_solve(base, y, prev * 3, 1e-2, 0.0), prev, atol=1e-12)
    dists = [np.abs(oracle.dense_oct_solve(base, 2 * y, prev, 1e-2, s) - prev).max()
             for s in (1.0, 1e3, 1e6)]
    assert dists[0] > dists[1] > dists[2]
    assert dists[2] < 1e-3


def test_circular_convolution_matches_spectral_product(rng):
    a, b = rng.standard_normal((2, 3, 4))
    np.testing.assert_allclose(
        oracle.circular_convolution(a, b), np.fft.ifft2(fft2(a) * fft2(b)).real, atol=1e-12
    )


def test_size_cap():
    with pytest.raises(ValueError, match="cap"):
        oracle.naive_dft(np.zeros((9, 9)))


@pytest.mark.parametrize("fn", [oracle.dense_ridge_solve])
def test_nonpositive_lambda_rejected(fn):
    with pytest.raises(ValueError):
        fn(np.ones(3), np.ones(3), 0.0)
