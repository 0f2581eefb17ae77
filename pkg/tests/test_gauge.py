"""Gauge transform layer: round trips, modulus identity, equivariance."""

import numpy as np
import pytest

from torus_snls.evolve import rhs_v, strang_step_u
from torus_snls.gauge import SimState, prepared_initial_datum, to_u, to_v
from torus_snls.lab import make_datum
from torus_snls.spectral import get_grid, random_trig_poly

from conftest import make_null_noise


class TestRoundTrip:
    def test_u_v_u_exact(self, noise64):
        rng = np.random.default_rng(0)
        field = random_trig_poly(get_grid(64), 20, rng)
        st = SimState(t=0.37, field=field, gauge_tag="u_gauge",
                      noise=noise64, p=3.0, lam=-1.0)
        back = to_u(to_v(st))
        np.testing.assert_allclose(back.field.coeffs, field.coeffs, atol=1e-11)
        assert back.gauge_tag == "u_gauge"
        assert back.t == st.t

    def test_modulus_identity(self, noise64):
        """|v| = e^{Y_eps} |u| node by node, at a nonzero time."""
        rng = np.random.default_rng(1)
        field = random_trig_poly(get_grid(64), 20, rng)
        st = SimState(t=1.23, field=field, gauge_tag="u_gauge",
                      noise=noise64, p=3.0, lam=-1.0)
        v = to_v(st)
        lhs = np.abs(v.field.to_physical())
        rhs = noise64.exp_weight(1.0) * np.abs(field.to_physical())
        np.testing.assert_allclose(lhs, rhs, atol=1e-11)

    def test_gauge_tag_enforced(self, v_state64, u_state64):
        with pytest.raises(ValueError):
            to_v(v_state64)
        with pytest.raises(ValueError):
            to_u(u_state64)

    def test_null_noise_gauge_is_identity(self):
        noise = make_null_noise(32)
        rng = np.random.default_rng(2)
        field = random_trig_poly(get_grid(32), 10, rng)
        st = SimState(t=0.9, field=field, gauge_tag="u_gauge",
                      noise=noise, p=2.0, lam=0.0)
        v = to_v(st)
        np.testing.assert_allclose(v.field.coeffs, field.coeffs, atol=1e-13)


class TestPreparedDatum:
    def test_prepared_datum_gauges_back_to_v0(self, noise64):
        v0 = make_datum("gaussian_bump_spectrum", get_grid(64), 0.5)
        st = prepared_initial_datum(v0, noise64, 3.0, -1.0)
        assert st.t == 0.0 and st.gauge_tag == "u_gauge"
        v = to_v(st)
        np.testing.assert_allclose(v.field.coeffs, v0.coeffs, atol=1e-11)

    def test_prepared_datum_weights_pointwise(self, noise64):
        v0 = make_datum("constant", get_grid(64), 1.0)
        st = prepared_initial_datum(v0, noise64, 3.0, -1.0)
        np.testing.assert_allclose(st.field.to_physical().real,
                                   noise64.exp_weight(-1.0), atol=1e-11)


class TestStateValidation:
    def test_p_range(self, noise64, grid64):
        field = make_datum("constant", grid64, 1.0)
        with pytest.raises(ValueError):
            SimState(t=0.0, field=field, gauge_tag="u_gauge", noise=noise64,
                     p=1.5, lam=0.0)
        with pytest.raises(ValueError):
            SimState(t=0.0, field=field, gauge_tag="u_gauge", noise=noise64,
                     p=3.5, lam=0.0)

    def test_unknown_gauge_tag(self, noise64, grid64):
        field = make_datum("constant", grid64, 1.0)
        with pytest.raises(ValueError):
            SimState(t=0.0, field=field, gauge_tag="w_gauge", noise=noise64,
                     p=3.0, lam=0.0)

    def test_focusing_sign_warns(self, noise64, grid64, caplog):
        field = make_datum("constant", grid64, 1.0)
        import logging
        with caplog.at_level(logging.WARNING, logger="torus_snls.gauge"):
            SimState(t=0.0, field=field, gauge_tag="u_gauge", noise=noise64,
                     p=3.0, lam=+1.0)
        assert any("defocusing" in rec.message for rec in caplog.records)


class TestEquivariance:
    def test_gauged_flow_derivative_matches_rhs_v(self, noise64):
        """Centered finite difference of the gauged Strang trajectory
        converges at O(dt^2) to the gauged equation's right-hand side.
        This couples the u-equation, the transform (including the C_eps
        phase sign), and rhs_v in a single oracle."""
        v0 = make_datum("gaussian_bump_spectrum", get_grid(64), 1.0)
        st = prepared_initial_datum(v0, noise64, 3.0, -1.0)
        r0 = rhs_v(to_v(st)).coeffs
        scale = np.linalg.norm(r0)
        errs = []
        for dt in (2e-4, 1e-4):
            fwd = to_v(strang_step_u(st, dt)).field.coeffs
            bwd = to_v(strang_step_u(st, -dt)).field.coeffs
            errs.append(np.linalg.norm((fwd - bwd) / (2 * dt) - r0) / scale)
        assert errs[0] < 1e-5
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)

    def test_phase_disabled_drops_renormalization_rotation(self, noise64):
        rng = np.random.default_rng(3)
        field = random_trig_poly(get_grid(64), 10, rng)
        on = SimState(t=0.5, field=field, gauge_tag="u_gauge", noise=noise64,
                      p=3.0, lam=-1.0, renormalize_phase=True)
        off = SimState(t=0.5, field=field, gauge_tag="u_gauge", noise=noise64,
                       p=3.0, lam=-1.0, renormalize_phase=False)
        v_on = to_v(on).field.coeffs
        v_off = to_v(off).field.coeffs
        phase = np.exp(1j * noise64.C_eps * 0.5)
        np.testing.assert_allclose(v_on, phase * v_off, atol=1e-11)
