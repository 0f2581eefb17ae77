"""Gauge transform between the original unknown u and the gauged unknown v.

v(t) = e^{+i C_eps t} e^{Y_eps} u(t).  With the convention
i u_t = Delta u + xi_eps u + ..., differentiating e^{Y} u produces the term
+C_eps v once |grad Y_eps|^2 is split into its renormalized part plus C_eps,
and the phase e^{+i C_eps t} is the one that cancels it, leaving exactly the
renormalized v-equation.  The multiplications are carried out pointwise on
the base grid so the round trip u -> v -> u is exact to roundoff; the phase
has modulus one, hence |v| = e^{Y_eps}|u| at every node and every time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .noise import NoiseRealization
from .spectral import SpectralField, to_spectral

__all__ = ["SimState", "to_v", "to_u", "prepared_initial_datum"]

logger = logging.getLogger(__name__)

U_GAUGE = "u_gauge"
V_GAUGE = "v_gauge"


@dataclass(eq=False)
class SimState:
    """Field at time t, tagged by which of the two PDEs it satisfies."""

    t: float
    field: SpectralField
    gauge_tag: str
    noise: NoiseRealization
    p: float
    lam: float
    renormalize_phase: bool = True  # gate for the e^{-i C_eps t} factor

    def __post_init__(self):
        if self.gauge_tag not in (U_GAUGE, V_GAUGE):
            raise ValueError(f"unknown gauge tag {self.gauge_tag!r}")
        if not 2.0 <= self.p <= 3.0:
            raise ValueError(f"p must lie in [2, 3], got {self.p}")
        if self.lam > 0:
            logger.warning("lambda = %g > 0 is outside the defocusing hypothesis", self.lam)


def _phase(state: SimState) -> complex:
    if not state.renormalize_phase:
        return 1.0 + 0.0j
    return np.exp(1j * state.noise.C_eps * state.t)


def to_v(state: SimState) -> SimState:
    """u-gauge -> v-gauge: v = e^{+i C_eps t} e^{Y_eps} u pointwise."""
    if state.gauge_tag != U_GAUGE:
        raise ValueError(f"to_v expects a u-gauge state, got {state.gauge_tag}")
    w = state.noise.exp_weight(1.0)
    samples = _phase(state) * w * state.field.to_physical()
    return replace(state, field=to_spectral(samples, state.field.grid), gauge_tag=V_GAUGE)


def to_u(state: SimState) -> SimState:
    """v-gauge -> u-gauge: u = e^{-i C_eps t} e^{-Y_eps} v pointwise."""
    if state.gauge_tag != V_GAUGE:
        raise ValueError(f"to_u expects a v-gauge state, got {state.gauge_tag}")
    w = state.noise.exp_weight(-1.0)
    samples = np.conj(_phase(state)) * w * state.field.to_physical()
    return replace(state, field=to_spectral(samples, state.field.grid), gauge_tag=U_GAUGE)


def prepared_initial_datum(v0: SpectralField, noise: NoiseRealization,
                           p: float, lam: float,
                           renormalize_phase: bool = True) -> SimState:
    """Well-prepared u-gauge datum u(0) = e^{-Y_eps} v0 at t = 0.

    Initial data are always specified through v0 (the object required to lie
    in H^2); the corresponding u0 is e^{-Y} v0, and the prepared datum
    u0 e^{Y - Y_eps} collapses to e^{-Y_eps} v0.
    """
    w = noise.exp_weight(-1.0)
    samples = w * v0.to_physical()
    field = to_spectral(samples, v0.grid)
    return SimState(t=0.0, field=field, gauge_tag=U_GAUGE, noise=noise,
                    p=p, lam=lam, renormalize_phase=renormalize_phase)
