"""Time integration of the two regularized Cauchy problems.

The u-equation  i u_t = Delta u + xi_eps u + lambda u |u|^p  is advanced by
Strang splitting: the potential/nonlinear flow is an exact pointwise phase
(|u| is invariant under it) and the Delta flow is an exact Fourier multiplier.

The v-equation  i v_t = Delta v - 2 grad v . grad Y_eps + v :|grad Y_eps|^2:
+ lambda e^{-p Y_eps} v |v|^p  is advanced by Lawson integrating-factor RK4:
the stiff Delta part is integrated exactly, the remainder by classical RK4.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .gauge import U_GAUGE, V_GAUGE, SimState
from .noise import NoiseRealization
from .spectral import SpectralField, get_grid, gradient, to_spectral, truncate_to

__all__ = ["IntegratorConfig", "Trajectory", "rhs_v", "strang_step_u", "ifrk4_step_v", "run"]

logger = logging.getLogger(__name__)

BLOWUP_FACTOR = 1e6


@dataclass
class IntegratorConfig:
    scheme: str  # "strang_u" | "ifrk4_v"
    dt: float
    t_end: float
    dealias: bool = True
    snapshot_stride: int = 1

    def __post_init__(self):
        if self.scheme not in ("strang_u", "ifrk4_v"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.dt <= 0 or self.t_end < 0:
            raise ValueError("dt must be positive and t_end nonnegative")
        if self.t_end > 0 and self.dt > self.t_end + 1e-15:
            raise ValueError("dt must not exceed t_end")
        if self.snapshot_stride < 1:
            raise ValueError("snapshot_stride must be >= 1")

    @property
    def n_steps(self) -> int:
        n = round(self.t_end / self.dt)
        if abs(n * self.dt - self.t_end) > 1e-9 * max(1.0, self.t_end):
            raise ValueError("t_end must be an integer multiple of dt")
        return n


def check_transport_stability(cfg: IntegratorConfig, noise: NoiseRealization,
                              bound: float = 0.5) -> bool:
    """Warn-only guard dt * N * max|grad Y_eps| <= bound for the ifrk4 scheme."""
    grid = noise.grid
    gmax = float(np.max(np.hypot(noise.phys("dY1"), noise.phys("dY2"))))
    ok = cfg.dt * grid.N * gmax <= bound
    if not ok:
        logger.warning(
            "ifrk4_v transport stability bound violated: dt*N*max|grad Y_eps| = %.3g > %.3g",
            cfg.dt * grid.N * gmax, bound)
    return ok


def rhs_v(state: SimState) -> SpectralField:
    """Right-hand side dv/dt of the gauged equation.

    Derivatives are spectral; products are formed in physical space on the
    2x oversampled grid and truncated back (2/3-style dealiasing via padding).
    """
    if state.gauge_tag != V_GAUGE:
        raise ValueError(f"rhs_v expects a v-gauge state, got {state.gauge_tag}")
    noise = state.noise
    grid = state.field.grid
    fine = get_grid(2 * grid.N)

    v = state.field
    d1, d2 = gradient(v)
    v_f = v.to_physical(2)
    d1_f = d1.to_physical(2)
    d2_f = d2.to_physical(2)

    gY1 = noise.phys("dY1", 2)
    gY2 = noise.phys("dY2", 2)
    wick = noise.phys("wick_eps", 2)
    w_p = noise.exp_weight(-state.p, 2)

    lot = -2.0 * (d1_f * gY1 + d2_f * gY2) + v_f * wick
    if state.lam != 0.0:
        lot = lot + state.lam * w_p * v_f * np.abs(v_f) ** state.p
    lot_field = truncate_to(lot, fine, grid)

    coeffs = -1j * (-grid.nsq * v.coeffs + lot_field.coeffs)
    return SpectralField(grid, coeffs)


def _linear_multiplier(grid, dt: float) -> NDArray[np.complex128]:
    """Exact flow of i u_t = Delta u over dt: multiplier e^{i |n|^2 dt}."""
    return np.exp(1j * grid.nsq * dt)


def strang_step_u(state: SimState, dt: float) -> SimState:
    """One Strang step: exact potential phase half-step, exact Delta step,
    second potential half-step.  The phase step leaves |u| invariant node by
    node, which is what makes the splitting exact on each sub-flow."""
    if state.gauge_tag != U_GAUGE:
        raise ValueError(f"strang_step_u expects a u-gauge state, got {state.gauge_tag}")
    noise = state.noise
    grid = state.field.grid
    xi = noise.phys("xi_eps")

    u = state.field.to_physical()
    u = u * np.exp(-0.5j * dt * (xi + state.lam * np.abs(u) ** state.p))
    coeffs = to_spectral(u, grid).coeffs * _linear_multiplier(grid, dt)
    u = SpectralField(grid, coeffs).to_physical()
    u = u * np.exp(-0.5j * dt * (xi + state.lam * np.abs(u) ** state.p))
    return replace(state, t=state.t + dt, field=to_spectral(u, grid))


def ifrk4_step_v(state: SimState, dt: float) -> SimState:
    """One Lawson (integrating-factor) RK4 step for the v-equation."""
    if state.gauge_tag != V_GAUGE:
        raise ValueError(f"ifrk4_step_v expects a v-gauge state, got {state.gauge_tag}")
    grid = state.field.grid
    E_half = _linear_multiplier(grid, 0.5 * dt)
    E_full = _linear_multiplier(grid, dt)

    def nonlinear(coeffs: NDArray[np.complex128], t: float) -> NDArray[np.complex128]:
        s = replace(state, t=t, field=SpectralField(grid, coeffs))
        return rhs_v(s).coeffs - 1j * grid.nsq * coeffs  # rhs minus the -i*Delta part

    v = state.field.coeffs
    t = state.t
    k1 = nonlinear(v, t)
    k2 = nonlinear(E_half * (v + 0.5 * dt * k1), t + 0.5 * dt)
    k3 = nonlinear(E_half * v + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = nonlinear(E_full * v + dt * E_half * k3, t + dt)
    v_new = E_full * v + dt / 6.0 * (E_full * k1 + 2.0 * E_half * (k2 + k3) + k4)
    return replace(state, t=state.t + dt, field=SpectralField(grid, v_new))


@dataclass
class Trajectory:
    snapshots: list[SimState]
    observer_records: dict[str, list]
    aborted: bool = False
    abort_info: dict | None = None

    @property
    def times(self) -> list[float]:
        return [s.t for s in self.snapshots]

    @property
    def final(self) -> SimState:
        return self.snapshots[-1]


class BlowupError(RuntimeError):
    """Raised when the field magnitude explodes or turns non-finite."""

    def __init__(self, t: float, max_abs: float):
        super().__init__(f"field blow-up at t={t:.6g}: max|field| = {max_abs:.3g}")
        self.t = t
        self.max_abs = max_abs


def run(state: SimState, cfg: IntegratorConfig,
        observers: dict[str, Callable[[SimState], object]] | None = None,
        raise_on_abort: bool = True) -> Trajectory:
    """Advance a trajectory and evaluate observers at snapshot times."""
    if cfg.scheme == "strang_u":
        if state.gauge_tag != U_GAUGE:
            raise ValueError("strang_u requires a u-gauge initial state")
        step = strang_step_u
    else:
        if state.gauge_tag != V_GAUGE:
            raise ValueError("ifrk4_v requires a v-gauge initial state")
        check_transport_stability(cfg, state.noise)
        step = ifrk4_step_v

    observers = observers or {}
    initial_max = float(np.max(np.abs(state.field.to_physical())))
    guard = max(BLOWUP_FACTOR * initial_max, 1.0)

    snapshots = [state]
    records: dict[str, list] = {name: [fn(state)] for name, fn in observers.items()}
    traj = Trajectory(snapshots=snapshots, observer_records=records)

    for k in range(cfg.n_steps):
        state = step(state, cfg.dt)
        max_abs = float(np.max(np.abs(state.field.coeffs))) * state.field.grid.N
        if not np.isfinite(max_abs) or max_abs > guard:
            err = BlowupError(state.t, max_abs)
            if raise_on_abort:
                raise err
            traj.aborted = True
            traj.abort_info = {"t": state.t, "max_abs": max_abs}
            return traj
        if (k + 1) % cfg.snapshot_stride == 0 or k + 1 == cfg.n_steps:
            snapshots.append(state)
            for name, fn in observers.items():
                records[name].append(fn(state))
    return traj
