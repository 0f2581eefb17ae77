"""Pseudospectral laboratory for the 2-D torus NLS with multiplicative
spatial white noise: mollification, Wick renormalization, gauge transform,
split-step and integrating-factor integration, and convergence experiments."""

__version__ = "0.1.0"

from .spectral import (  # noqa: F401
    TorusGrid,
    SpectralField,
    to_spectral,
    apply_Ds,
    lq_norm,
    sobolev_norm,
    gradient,
    laplacian,
)
from .noise import (  # noqa: F401
    GaussianCoeffs,
    Mollifier,
    NoiseRealization,
    sample_gaussian,
    build_noise,
    compute_C_eps,
    wick_square,
    wick_limit_field,
    exp_field,
)
from .gauge import SimState, to_v, to_u, prepared_initial_datum  # noqa: F401
from .evolve import IntegratorConfig, rhs_v, strang_step_u, ifrk4_step_v, run  # noqa: F401
