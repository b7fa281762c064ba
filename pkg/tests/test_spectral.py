import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from octkcf.oracle import naive_dft, naive_idft
from octkcf.spectral import DimensionError, cdiv, cmul, fft2, ifft2, ifft2_complex

planes = st.tuples(st.integers(1, 8), st.integers(1, 8)).flatmap(
    lambda s: arrays(float, s, elements=st.floats(-10, 10, allow_nan=False))
)


def test_zeros_map_to_zeros():
    assert np.array_equal(fft2(np.zeros((4, 4))), np.zeros((4, 4)))


def test_impulse_has_flat_spectrum():
    p = np.zeros((4, 4))
    p[0, 0] = 1.0
    np.testing.assert_allclose(fft2(p), np.ones((4, 4)), atol=0)


def test_flat_spectrum_inverts_to_impulse():
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    np.testing.assert_allclose(ifft2(np.ones((4, 4), complex)), expected, atol=1e-15)


def test_dc_bin_is_sum(rng):
    p = rng.standard_normal((5, 3))
    assert fft2(p)[0, 0] == pytest.approx(p.sum(), abs=1e-12)


def test_matches_naive_dft_5x3(rng):
    p = rng.standard_normal((5, 3))
    np.testing.assert_allclose(fft2(p), naive_dft(p), atol=1e-10)


def test_2x2_inverse_matches_naive(rng):
    sp = np.array([[4 + 0j, 1 - 1j], [2 + 0j, 0.5j]])
    np.testing.assert_allclose(ifft2_complex(sp), naive_idft(sp), atol=1e-12)
    np.testing.assert_allclose(ifft2(sp), naive_idft(sp).real, atol=1e-12)


def test_channel_stack_is_transformed_per_plane(rng):
    x = rng.standard_normal((3, 4, 5))
    f = fft2(x)
    for c in range(3):
        np.testing.assert_allclose(f[c], fft2(x[c]), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(planes)
def test_round_trip(p):
    np.testing.assert_allclose(ifft2(fft2(p)), p, atol=1e-10 * max(1.0, np.abs(p).max()))


@settings(max_examples=25, deadline=None)
@given(planes)
def test_parseval(p):
    energy = np.sum(p**2)
    assert np.sum(np.abs(fft2(p)) ** 2) / p.size == pytest.approx(energy, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("bad", [[], [[]], [[1.0, 2.0], [3.0]], [1.0, 2.0]])
def test_malformed_planes_rejected(bad):
    with pytest.raises(DimensionError):
        fft2(bad)


def test_cmul_cdiv(rng):
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_allclose(cdiv(cmul(a, b), b), a, atol=1e-12)
    with pytest.raises(DimensionError):
        cmul(a, b[:2])


def test_cdiv_guards_only_exact_zero():
    a = np.array([1.0 + 0j, 2.0 + 0j])
    b = np.array([0.0 + 0j, 1e-20 + 0j])
    out = cdiv(a, b, epsilon=0.5)
    assert out[0] == 2.0
    assert out[1] == pytest.approx(2e20)
