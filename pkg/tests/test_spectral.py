"""Fourier-analysis layer: transforms, norms, resampling, derivatives."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torus_snls.spectral import (
    SpectralField,
    apply_Ds,
    get_grid,
    gradient,
    hermitian_defect,
    laplacian,
    lq_norm,
    random_trig_poly,
    resample_coeffs,
    sobolev_norm,
    to_spectral,
    truncate_to,
)


def plane_wave(grid, n1, n2, amp=1.0):
    coeffs = np.zeros((grid.N, grid.N), dtype=np.complex128)
    coeffs[n1 % grid.N, n2 % grid.N] = amp
    return SpectralField(grid, coeffs)


class TestGrid:
    def test_nodes_start_at_minus_pi(self, grid16):
        assert grid16.x1[0, 0] == pytest.approx(-np.pi)
        assert grid16.x2[0, -1] == pytest.approx(np.pi - 2 * np.pi / 16)

    def test_frequency_range(self, grid16):
        assert grid16.n1.min() == -8 and grid16.n1.max() == 7

    def test_quad_weight_integrates_one(self, grid16):
        assert grid16.quad_weight * 16**2 == pytest.approx((2 * np.pi) ** 2)

    def test_rejects_odd_or_tiny(self):
        from torus_snls.spectral import TorusGrid
        with pytest.raises(ValueError):
            TorusGrid(15)
        with pytest.raises(ValueError):
            TorusGrid(4)

    def test_grid_cache_identity(self):
        assert get_grid(16) is get_grid(16)


class TestTransforms:
    def test_plane_wave_samples(self, grid16):
        """e^{i n.x} sampled at the nodes, for a handful of modes."""
        for n in [(0, 0), (1, 0), (0, -3), (5, 7), (-8, 2)]:
            f = plane_wave(grid16, *n)
            expected = np.exp(1j * (n[0] * grid16.x1 + n[1] * grid16.x2))
            np.testing.assert_allclose(f.to_physical(), expected, atol=1e-12)

    def test_round_trip(self, grid32):
        rng = np.random.default_rng(0)
        f = random_trig_poly(grid32, 12, rng)
        g = to_spectral(f.to_physical(), grid32)
        np.testing.assert_allclose(g.coeffs, f.coeffs, atol=1e-13)

    def test_oversampled_round_trip(self, grid16):
        rng = np.random.default_rng(1)
        f = random_trig_poly(grid16, 6, rng, real=True)
        fine = get_grid(32)
        back = truncate_to(f.to_physical(2), fine, grid16)
        np.testing.assert_allclose(back.coeffs, f.coeffs, atol=1e-13)

    def test_parseval(self, grid32):
        rng = np.random.default_rng(2)
        f = random_trig_poly(grid32, 10, rng)
        l2_sq = lq_norm(f, 2) ** 2
        coeff_sq = (2 * np.pi) ** 2 * np.sum(np.abs(f.coeffs) ** 2)
        assert l2_sq == pytest.approx(coeff_sq, rel=1e-12)

    def test_realness_flag_rejects_asymmetric(self, grid16):
        coeffs = np.zeros((16, 16), dtype=np.complex128)
        coeffs[1, 0] = 1.0  # no conjugate partner set
        with pytest.raises(ValueError):
            SpectralField(grid16, coeffs, realness_flag=True)

    def test_hermitian_defect_zero_for_real_field(self, grid16):
        rng = np.random.default_rng(3)
        f = random_trig_poly(grid16, 5, rng, real=True)
        assert hermitian_defect(grid16, f.coeffs) < 1e-14
        assert np.max(np.abs(f.to_physical().imag)) < 1e-13

    def test_shape_mismatch_raises(self, grid16, grid32):
        with pytest.raises(ValueError):
            SpectralField(grid16, np.zeros((32, 32), dtype=np.complex128))
        with pytest.raises(ValueError):
            to_spectral(np.zeros((16, 16)), grid32)


class TestResampling:
    def test_upsample_preserves_coefficients(self, grid16):
        rng = np.random.default_rng(4)
        f = random_trig_poly(grid16, 6, rng)
        up = resample_coeffs(f.coeffs, 32)
        g32 = get_grid(32)
        sel = (np.abs(g32.n1) <= 6) & (np.abs(g32.n2) <= 6)
        # compare on the shared mode set via a second downsample
        down = resample_coeffs(up, 16)
        np.testing.assert_allclose(down, f.coeffs, atol=1e-14)
        assert np.sum(np.abs(up) > 0) == np.sum(np.abs(f.coeffs) > 0)
        del sel

    def test_downsample_zeroes_coarse_nyquist(self):
        """Truncating a real field must keep it real: modes that lose their
        conjugate partner are dropped rather than kept one-sidedly."""
        fine = get_grid(32)
        rng = np.random.default_rng(5)
        f = random_trig_poly(fine, 15, rng, real=True)
        down = resample_coeffs(f.coeffs, 16)
        g16 = get_grid(16)
        assert np.all(down[g16.nyquist_mask] == 0)
        assert hermitian_defect(g16, down) < 1e-14

    def test_identity_resample_copies(self, grid16):
        rng = np.random.default_rng(6)
        f = random_trig_poly(grid16, 4, rng)
        out = resample_coeffs(f.coeffs, 16)
        assert out is not f.coeffs
        np.testing.assert_array_equal(out, f.coeffs)


class TestCalculus:
    def test_gradient_plane_wave(self, grid16):
        f = plane_wave(grid16, 3, -2, amp=0.7)
        d1, d2 = gradient(f)
        np.testing.assert_allclose(d1.coeffs, 3j * f.coeffs, atol=1e-14)
        np.testing.assert_allclose(d2.coeffs, -2j * f.coeffs, atol=1e-14)

    def test_laplacian_matches_double_gradient(self, grid32):
        rng = np.random.default_rng(7)
        f = random_trig_poly(grid32, 10, rng)
        d1, d2 = gradient(f)
        dd = gradient(d1)[0].coeffs + gradient(d2)[1].coeffs
        np.testing.assert_allclose(laplacian(f).coeffs, dd, atol=1e-12)

    def test_gradient_zeroes_nyquist(self, grid16):
        coeffs = np.ones((16, 16), dtype=np.complex128)
        f = SpectralField(grid16, coeffs)
        d1, _ = gradient(f)
        assert np.all(d1.coeffs[grid16.nyquist_mask] == 0)

    def test_gradient_of_real_is_real(self, grid16):
        rng = np.random.default_rng(8)
        f = random_trig_poly(grid16, 5, rng, real=True)
        d1, d2 = gradient(f)
        assert np.max(np.abs(d1.to_physical().imag)) < 1e-12
        assert np.max(np.abs(d2.to_physical().imag)) < 1e-12


class TestNorms:
    def test_constant_lq(self, grid16):
        f = plane_wave(grid16, 0, 0, amp=2.0)
        for q in (1.0, 2.0, 4.0):
            assert lq_norm(f, q) == pytest.approx(2.0 * (2 * np.pi) ** (2 / q), rel=1e-12)
        assert lq_norm(f, np.inf) == pytest.approx(2.0)

    def test_sobolev_plane_wave(self, grid16):
        f = plane_wave(grid16, 3, 4)
        # <n> = sqrt(1 + 25); H^s norm = <n>^s * 2 pi
        for s in (-1.0, 0.5, 2.0):
            expect = (1 + 25.0) ** (s / 2) * 2 * np.pi
            assert sobolev_norm(f, s, 2) == pytest.approx(expect, rel=1e-12)

    def test_weighted_norm(self, grid16):
        f = plane_wave(grid16, 0, 0, amp=1.0)
        w = plane_wave(grid16, 0, 0, amp=3.0)
        assert lq_norm(f, 2, weight=w) == pytest.approx(np.sqrt(3.0) * 2 * np.pi, rel=1e-12)

    def test_weight_rejections(self, grid16):
        f = plane_wave(grid16, 1, 0)
        w = plane_wave(grid16, 0, 0, amp=-1.0)
        with pytest.raises(ValueError):
            lq_norm(f, 2, weight=w)
        with pytest.raises(ValueError):
            lq_norm(f, np.inf, weight=plane_wave(grid16, 0, 0))
        with pytest.raises(ValueError):
            lq_norm(f, 0.5)

    def test_apply_Ds_zero_is_copy(self, grid16):
        rng = np.random.default_rng(9)
        f = random_trig_poly(grid16, 5, rng)
        g = apply_Ds(f, 0.0)
        assert g is not f
        np.testing.assert_array_equal(g.coeffs, f.coeffs)


class TestProperties:
    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000), s=st.floats(0.0, 2.0),
           t=st.floats(0.0, 2.0))
    def test_sobolev_monotone_in_s(self, seed, s, t):
        """||f||_{H^s} <= ||f||_{H^t} whenever s <= t (the multiplier <n>^s
        is monotone in s for <n> >= 1)."""
        grid = get_grid(16)
        rng = np.random.default_rng(seed)
        f = random_trig_poly(grid, 6, rng)
        lo, hi = sorted((s, t))
        assert sobolev_norm(f, lo, 2) <= sobolev_norm(f, hi, 2) * (1 + 1e-12)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000),
           scale=st.floats(1e-3, 1e3))
    def test_norm_homogeneity(self, seed, scale):
        grid = get_grid(16)
        rng = np.random.default_rng(seed)
        f = random_trig_poly(grid, 6, rng)
        g = SpectralField(grid, scale * f.coeffs)
        assert lq_norm(g, 2) == pytest.approx(scale * lq_norm(f, 2), rel=1e-10)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_round_trip_property(self, seed):
        grid = get_grid(16)
        rng = np.random.default_rng(seed)
        f = random_trig_poly(grid, 7, rng)
        back = to_spectral(f.to_physical(), grid)
        np.testing.assert_allclose(back.coeffs, f.coeffs, atol=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_triangle_inequality(self, seed):
        grid = get_grid(16)
        rng = np.random.default_rng(seed)
        f = random_trig_poly(grid, 6, rng)
        g = random_trig_poly(grid, 6, rng)
        h = SpectralField(grid, f.coeffs + g.coeffs)
        assert lq_norm(h, 2) <= lq_norm(f, 2) + lq_norm(g, 2) + 1e-10
