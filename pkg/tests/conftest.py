"""Shared fixtures: small grids, canned noise realizations, and states."""

import numpy as np
import pytest

from torus_snls.gauge import prepared_initial_datum, to_v
from torus_snls.lab import make_datum
from torus_snls.noise import GaussianCoeffs, Mollifier, build_noise, sample_gaussian
from torus_snls.spectral import get_grid


@pytest.fixture(scope="session")
def grid16():
    return get_grid(16)


@pytest.fixture(scope="session")
def grid32():
    return get_grid(32)


@pytest.fixture(scope="session")
def grid64():
    return get_grid(64)


@pytest.fixture(scope="session")
def noise64():
    """Smooth, well-conditioned realization used by most evolution tests."""
    coeffs = sample_gaussian(2, 0, 64)
    return build_noise(coeffs, Mollifier("gaussian_rho"), 0.5)


@pytest.fixture(scope="session")
def noise32():
    coeffs = sample_gaussian(2, 0, 32)
    return build_noise(coeffs, Mollifier("gaussian_rho"), 0.5)


def make_null_noise(N: int):
    """Exact zero-noise realization: zero coefficients and a sharp cutoff
    that empties the lattice sum, so xi, Y, C and the Wick square all vanish."""
    grid = get_grid(N)
    zero = GaussianCoeffs(seed=-1, stream_id=0, N=N,
                          g=np.zeros((N, N), dtype=np.complex128))
    return build_noise(zero, Mollifier("sharp_cutoff_rho"), 2.0)


@pytest.fixture(scope="session")
def null_noise32():
    return make_null_noise(32)


@pytest.fixture()
def v_state64(noise64):
    v0 = make_datum("gaussian_bump_spectrum", get_grid(64), 0.3)
    return to_v(prepared_initial_datum(v0, noise64, 3.0, -1.0))


@pytest.fixture()
def u_state64(noise64):
    v0 = make_datum("gaussian_bump_spectrum", get_grid(64), 0.3)
    return prepared_initial_datum(v0, noise64, 3.0, -1.0)
