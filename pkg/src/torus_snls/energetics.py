"""Conserved and almost-conserved functionals of the gauged flow.

Implements the mass and Hamiltonian, the modified energies F, G and the
defect functional H whose identity dE/dt = lambda * H (with E = F + lambda G)
replaces exact conservation for p > 2, plus the Gagliardo-Nirenberg and
Brezis-Gallouet ratio monitors and two Gronwall bound utilities.

Every term of F, G and H is transcribed literally as a named sub-evaluator;
no algebraic simplification is applied, so each term can be unit-tested
against an independent quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .evolve import rhs_v
from .gauge import V_GAUGE, SimState
from .spectral import (
    SpectralField,
    get_grid,
    gradient,
    laplacian,
    lq_norm,
    sobolev_norm,
    to_spectral,
)

__all__ = [
    "EnergyReport",
    "mass",
    "hamiltonian",
    "quadratic_energy_pair",
    "kinetic_F",
    "potential_G",
    "defect_H",
    "modified_energy_E",
    "gn_check",
    "brezis_gallouet_check",
    "gronwall_log_bound",
    "gronwall_linear_bound",
    "evaluate_report",
]

MODULUS_FLOOR = 1e-30  # removable-singularity guard for |v|^(p-4) factors


# ---------------------------------------------------------------------------
# shared fine-grid kit

class _Kit:
    """Node arrays of the state and its noise on the 2x oversampled grid."""

    def __init__(self, state: SimState, oversample: int = 2):
        if state.gauge_tag != V_GAUGE:
            raise ValueError("energy functionals expect a v-gauge state")
        self.state = state
        grid = state.field.grid
        self.fine = get_grid(oversample * grid.N) if oversample > 1 else grid
        self.quad = self.fine.quad_weight
        ov = oversample
        noise = state.noise

        v = state.field
        d1, d2 = gradient(v)
        self.v = v.to_physical(ov)
        self.d1 = d1.to_physical(ov)
        self.d2 = d2.to_physical(ov)
        self.lap = laplacian(v).to_physical(ov)
        self.gY1 = noise.phys("dY1", ov)
        self.gY2 = noise.phys("dY2", ov)
        self.wick = noise.phys("wick_eps", ov)
        self.w2 = noise.exp_weight(-2.0, ov)                      # e^{-2 Y_eps}
        self.wp2 = noise.exp_weight(-(state.p + 2.0), ov)         # e^{-(p+2) Y_eps}
        self.absv2 = np.abs(self.v) ** 2
        # grad(|v|^2) = 2 Re(conj(v) grad v), computed pointwise
        self.re_vbar_d1 = np.real(np.conj(self.v) * self.d1)
        self.re_vbar_d2 = np.real(np.conj(self.v) * self.d2)

    def integral(self, vals: NDArray) -> float:
        return float(np.sum(vals) * self.quad)

    def dt_abs_pow(self, alpha: float, vt: NDArray) -> NDArray:
        """d/dt |v|^alpha = alpha |v|^(alpha-2) Re(conj(v) v_t), guarded at v = 0."""
        if alpha == 0.0:
            return np.zeros_like(self.absv2)
        re_vbar_vt = np.real(np.conj(self.v) * vt)
        safe = np.where(self.absv2 < MODULUS_FLOOR, 1.0, self.absv2)
        out = alpha * safe ** (alpha / 2.0 - 1.0) * re_vbar_vt
        return np.where(self.absv2 < MODULUS_FLOOR, 0.0, out)


# ---------------------------------------------------------------------------
# mass and Hamiltonian

def mass(state: SimState) -> float:
    """Conserved mass: integral of e^{-2 Y_eps} |v|^2 (base-grid quadrature)."""
    if state.gauge_tag != V_GAUGE:
        raise ValueError("mass expects a v-gauge state")
    grid = state.field.grid
    w = state.noise.exp_weight(-2.0)
    vals = w * np.abs(state.field.to_physical()) ** 2
    return float(np.sum(vals) * grid.quad_weight)


def hamiltonian(state: SimState) -> float:
    """Conserved energy of the gauged flow:
    integral of e^{-2Y_eps}(|grad v|^2 - :|grad Y_eps|^2: |v|^2
                            - (2 lambda / (p+2)) e^{-p Y_eps} |v|^(p+2))."""
    k = _Kit(state)
    wp = state.noise.exp_weight(-state.p, 2)
    dens = (np.abs(k.d1) ** 2 + np.abs(k.d2) ** 2
            - k.wick * k.absv2
            - (2.0 * state.lam / (state.p + 2.0)) * wp * k.absv2 ** ((state.p + 2.0) / 2.0))
    return k.integral(k.w2 * dens)


def quadratic_energy_pair(u: SpectralField, v: SpectralField, noise,
                          check_gauge: bool = True) -> tuple[float, float]:
    """The two sides of the quadratic-energy cancellation:
    integral(|grad u|^2 - |u|^2 xi_eps)  vs
    integral((|grad v|^2 - |v|^2 |grad Y_eps|^2) e^{-2 Y_eps}).
    """
    grid = u.grid
    fine = get_grid(2 * grid.N)
    if check_gauge:
        w = noise.exp_weight(1.0)
        defect = np.max(np.abs(v.to_physical() - w * u.to_physical()))
        scale = max(1.0, float(np.max(np.abs(v.to_physical()))))
        if defect > 1e-8 * scale:
            raise ValueError(f"v != e^(Y_eps) u: pointwise defect {defect:.3e}")

    du1, du2 = (f.to_physical(2) for f in gradient(u))
    u_f = u.to_physical(2)
    xi = noise.phys("xi_eps", 2)
    lhs = float(np.sum(np.abs(du1) ** 2 + np.abs(du2) ** 2 - np.abs(u_f) ** 2 * xi)
                * fine.quad_weight)

    dv1, dv2 = (f.to_physical(2) for f in gradient(v))
    v_f = v.to_physical(2)
    gY1 = noise.phys("dY1", 2)
    gY2 = noise.phys("dY2", 2)
    w2 = noise.exp_weight(-2.0, 2)
    rhs = float(np.sum((np.abs(dv1) ** 2 + np.abs(dv2) ** 2
                        - np.abs(v_f) ** 2 * (gY1**2 + gY2**2)) * w2) * fine.quad_weight)
    return lhs, rhs


# ---------------------------------------------------------------------------
# modified energies

def kinetic_F_terms(state: SimState) -> dict[str, float]:
    """The seven kinetic-energy integrals, term by term."""
    k = _Kit(state)
    grad_dot = k.gY1 * np.conj(k.d1) + k.gY2 * np.conj(k.d2)   # grad Y . grad conj(v)
    # grad(e^{-2Y}) = -2 grad(Y) e^{-2Y}, exact pointwise
    gw1 = -2.0 * k.gY1 * k.w2
    gw2 = -2.0 * k.gY2 * k.w2
    terms = {
        "lap_sq": k.integral(np.abs(k.lap) ** 2 * k.w2),
        "lap_gradY_grad": -4.0 * k.integral(np.real(k.lap * grad_dot) * k.w2),
        "grad_sq_gradY_sq": 4.0 * k.integral(
            (np.abs(k.d1) ** 2 * k.gY1**2 + np.abs(k.d2) ** 2 * k.gY2**2) * k.w2),
        "cross_gradY": 8.0 * k.integral(
            k.gY1 * k.gY2 * np.real(k.d1 * np.conj(k.d2)) * k.w2),
        "wick_grad_weight": 2.0 * k.integral(
            np.real(k.v * (np.conj(k.d1) * gw1 + np.conj(k.d2) * gw2)) * k.wick),
        "lap_wick": 2.0 * k.integral(np.real(k.lap * np.conj(k.v)) * k.wick * k.w2),
        "wick_sq": k.integral(k.absv2 * k.wick**2 * k.w2),
    }
    return terms


def kinetic_F(state: SimState) -> float:
    return float(sum(kinetic_F_terms(state).values()))


def potential_G_terms(state: SimState) -> dict[str, float]:
    """The five potential-energy integrals, term by term."""
    k = _Kit(state)
    p = state.p
    absv_p = k.absv2 ** (p / 2.0)
    # grad(|v|^p) = p |v|^(p-2) Re(conj(v) grad v); p >= 2 keeps this regular
    absv_pm2 = k.absv2 ** (p / 2.0 - 1.0) if p != 2.0 else np.ones_like(k.absv2)
    gvp1 = p * absv_pm2 * k.re_vbar_d1
    gvp2 = p * absv_pm2 * k.re_vbar_d2
    grad_abs2_sq = 4.0 * (k.re_vbar_d1**2 + k.re_vbar_d2**2)   # |grad(|v|^2)|^2
    grad_sq = np.abs(k.d1) ** 2 + np.abs(k.d2) ** 2
    terms = {
        "grad_sq_mod_p": -k.integral(grad_sq * absv_p * k.wp2),
        "v_gradmod_grad": -2.0 * k.integral(
            np.real(k.v * (gvp1 * np.conj(k.d1) + gvp2 * np.conj(k.d2))) * k.wp2),
        "grad_mod2_sq": (p / 4.0) * k.integral(grad_abs2_sq * absv_pm2 * k.wp2),
        "wick_mod_p2": (2.0 / (p + 2.0)) * k.integral(
            k.absv2 ** ((p + 2.0) / 2.0) * k.wick * k.wp2),
        "gradY_mod_p": 2.0 * p * k.integral(
            np.real(k.v * (k.gY1 * np.conj(k.d1) + k.gY2 * np.conj(k.d2))) * absv_p * k.wp2),
    }
    return terms


def potential_G(state: SimState) -> float:
    return float(sum(potential_G_terms(state).values()))


def defect_H_terms(state: SimState, vt: SpectralField | None = None) -> dict[str, float]:
    """The four defect integrals; d/dt terms use the equation's right-hand
    side, never a finite difference."""
    k = _Kit(state)
    p = state.p
    if vt is None:
        vt = rhs_v(state)
    vt_f = vt.to_physical(2)

    absv_p = k.absv2 ** (p / 2.0)
    absv_pm2 = k.absv2 ** (p / 2.0 - 1.0) if p != 2.0 else np.ones_like(k.absv2)
    gvp1 = p * absv_pm2 * k.re_vbar_d1
    gvp2 = p * absv_pm2 * k.re_vbar_d2
    grad_abs2_sq = 4.0 * (k.re_vbar_d1**2 + k.re_vbar_d2**2)
    grad_sq = np.abs(k.d1) ** 2 + np.abs(k.d2) ** 2

    dt_mod_p = k.dt_abs_pow(p, vt_f)
    dt_mod_pm2 = k.dt_abs_pow(p - 2.0, vt_f)
    # d/dt (v |v|^p) = v_t |v|^p + v d/dt(|v|^p)
    dt_v_mod_p = vt_f * absv_p + k.v * dt_mod_p

    terms = {
        "grad_sq_dt_mod": -k.integral(grad_sq * dt_mod_p * k.wp2),
        "vt_gradmod_grad": -2.0 * k.integral(
            np.real(vt_f * (gvp1 * np.conj(k.d1) + gvp2 * np.conj(k.d2))) * k.wp2),
        "grad_mod2_sq_dt": -(p / 4.0) * k.integral(grad_abs2_sq * dt_mod_pm2 * k.wp2),
        "dt_v_mod_gradY": 2.0 * p * k.integral(
            np.real(dt_v_mod_p * (k.gY1 * np.conj(k.d1) + k.gY2 * np.conj(k.d2))) * k.wp2),
    }
    return terms


def defect_H(state: SimState, vt: SpectralField | None = None) -> float:
    return float(sum(defect_H_terms(state, vt).values()))


def modified_energy_E(state: SimState) -> float:
    """E = F + lambda * G (exactly as evaluated)."""
    return kinetic_F(state) + state.lam * potential_G(state)


# ---------------------------------------------------------------------------
# inequality monitors

def gn_check(v: SpectralField) -> tuple[float, float]:
    """Gagliardo-Nirenberg pair: (||grad v||_{L4}^2, ||Delta v||_{L2} ||grad v||_{L2})."""
    d1, d2 = gradient(v)
    g1 = d1.to_physical(2)
    g2 = d2.to_physical(2)
    fine = get_grid(2 * v.grid.N)
    grad_abs = np.sqrt(np.abs(g1) ** 2 + np.abs(g2) ** 2)
    lhs = float(np.sum(grad_abs**4) * fine.quad_weight) ** 0.5
    l2_grad = float(np.sum(grad_abs**2) * fine.quad_weight) ** 0.5
    l2_lap = lq_norm(laplacian(v), 2)
    return lhs, l2_lap * l2_grad


def brezis_gallouet_check(v: SpectralField) -> tuple[float, float]:
    """Pair (||v||_Linf, ||v||_H1 * sqrt(ln(2 + ||v||_L2 + ||Delta v||_L2)))."""
    lhs = lq_norm(v, np.inf, oversample=2)
    h1 = sobolev_norm(v, 1.0, 2)
    l2 = lq_norm(v, 2)
    lap = lq_norm(laplacian(v), 2)
    rhs = h1 * np.sqrt(np.log(2.0 + l2 + lap))
    return lhs, float(rhs)


def diamagnetic_pair(v: SpectralField) -> tuple[float, float]:
    """(||grad |v| ||_{L2}, ||grad v||_{L2}); |v| differentiated spectrally
    on the oversampled grid."""
    fine = get_grid(2 * v.grid.N)
    absv = np.abs(v.to_physical(2))
    mod = to_spectral(absv, fine)
    d1, d2 = gradient(mod)
    lhs = np.sqrt(lq_norm(d1, 2) ** 2 + lq_norm(d2, 2) ** 2)
    g1, g2 = gradient(v)
    rhs = np.sqrt(lq_norm(g1, 2) ** 2 + lq_norm(g2, 2) ** 2)
    return float(lhs), float(rhs)


# ---------------------------------------------------------------------------
# Gronwall utilities

def gronwall_log_bound(A: float, B: float, C: float, t: float) -> float:
    """Bound (A+C)^(e^(B t)) for f <= A + B int f ln(C + f), with A,B,C > 1."""
    if not (A > 1 and B > 1 and C > 1 and t >= 0):
        raise ValueError("gronwall_log_bound requires A, B, C > 1 and t >= 0")
    return float((A + C) ** np.exp(B * t))


def gronwall_linear_bound(A: float, B: float, t: float) -> float:
    """Bound A/B * e^(B t) for f' <= A + B f, f(0) = 0, with A, B > 0."""
    if not (A > 0 and B > 0 and t >= 0):
        raise ValueError("gronwall_linear_bound requires A, B > 0 and t >= 0")
    return float(A / B * np.exp(B * t))


# ---------------------------------------------------------------------------
# reporting

@dataclass
class EnergyReport:
    t: float
    mass: float
    hamiltonian: float
    F: float
    G: float
    E: float
    H: float
    l2: float
    h1: float
    h2: float
    wdelta: float  # ||Delta v||_{L2(e^{-2 Y_eps})}

    CSV_COLUMNS = ("t", "mass", "hamiltonian", "F", "G", "E", "H", "l2", "h1", "h2", "wdelta")

    def csv_row(self) -> list[float]:
        return [getattr(self, c) for c in self.CSV_COLUMNS]


def evaluate_report(state: SimState) -> EnergyReport:
    F = kinetic_F(state)
    G = potential_G(state)
    H = defect_H(state)
    v = state.field
    lapv = laplacian(v)
    w2 = state.noise.exp_weight(-2.0, 2)
    fine = get_grid(2 * v.grid.N)
    wdelta = float(np.sqrt(np.sum(np.abs(lapv.to_physical(2)) ** 2 * w2) * fine.quad_weight))
    return EnergyReport(
        t=state.t,
        mass=mass(state),
        hamiltonian=hamiltonian(state),
        F=F, G=G, E=F + state.lam * G, H=H,
        l2=lq_norm(v, 2),
        h1=sobolev_norm(v, 1.0, 2),
        h2=sobolev_norm(v, 2.0, 2),
        wdelta=wdelta,
    )
