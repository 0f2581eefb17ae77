"""Experiment orchestration: epsilon-family convergence runs, modulus
comparisons, Monte Carlo noise statistics, cross-integrator uniqueness
probes, and CSV/JSON persistence."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .energetics import (
    EnergyReport,
    defect_H,
    evaluate_report,
    modified_energy_E,
)
from .evolve import ifrk4_step_v, strang_step_u
from .gauge import prepared_initial_datum, to_v
from .noise import Mollifier, build_noise, sample_gaussian
from .spectral import (
    SpectralField,
    get_grid,
    lq_norm,
    sobolev_norm,
    to_spectral,
)

__all__ = [
    "LabConfig",
    "ConvergenceRun",
    "run_epsilon_family",
    "modulus_comparison",
    "run_noise_stats",
    "uniqueness_probe",
    "identity_residuals",
    "make_datum",
    "affine_fit",
    "power_fit",
]


DEFAULT_EPSILONS = tuple(2.0**-k for k in range(2, 7))
DEFAULT_GAMMAS = (0.0, 0.5, 1.0, 1.5)


@dataclass
class LabConfig:
    """Experiment configuration.

    Defaults reproduce the headline epsilon-family convergence run: the
    lattice must resolve the smallest mollification scale (min eps >= 4/N,
    hence N = 256 for eps down to 2^-6), dt must resolve the exponentially
    weighted nonlinearity (the weight e^{-p Y_eps} spans several orders of
    magnitude pointwise, so the default seed is a draw whose extremes of
    Y_eps stay within ~4.1 and the default amplitude keeps the nonlinear
    phase rotation per step well under one radian).
    """

    N: int = 256
    p: float = 3.0
    lam: float = -1.0
    mollifier: str = "gaussian_rho"
    epsilon_list: tuple[float, ...] = DEFAULT_EPSILONS
    gamma_list: tuple[float, ...] = DEFAULT_GAMMAS
    T: float = 0.5
    dt: float = 2e-4
    seed: int = 5
    stream_id: int = 0
    sample_count: int = 200
    datum: str = "gaussian_bump_spectrum"
    amplitude: float = 0.3
    snapshot_count: int = 50
    renormalize_phase: bool = True

    def __post_init__(self):
        eps = tuple(self.epsilon_list)
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("epsilon_list must be strictly decreasing")
        if eps and min(eps) < 4.0 / self.N - 1e-12:
            raise ValueError(
                f"min epsilon {min(eps):.4g} below lattice floor 4/N = {4.0 / self.N:.4g}")
        if any(not 0.0 <= g < 2.0 for g in self.gamma_list):
            raise ValueError("gamma_list entries must lie in [0, 2)")
        self.epsilon_list = eps
        self.gamma_list = tuple(self.gamma_list)

    def to_manifest(self) -> dict:
        d = asdict(self)
        d["code_version"] = __version__
        return d


def make_datum(name: str, grid, amplitude: float = 1.0) -> SpectralField:
    """Named v0 presets, all smooth (H^2) by construction."""
    coeffs = np.zeros((grid.N, grid.N), dtype=np.complex128)
    if name == "constant":
        coeffs[0, 0] = amplitude
    elif name == "single_mode":
        i = 1 % grid.N
        coeffs[i, 0] = amplitude
    elif name == "gaussian_bump_spectrum":
        weights = np.exp(-grid.nsq / 4.0)
        coeffs = amplitude * weights / weights.sum()  # peak value ~ amplitude
    else:
        raise ValueError(f"unknown datum preset {name!r}")
    return SpectralField(grid, coeffs)


# ---------------------------------------------------------------------------
# fitting helpers

def affine_fit(x, y) -> tuple[float, float, float]:
    """Least-squares y = a*x + b; returns (a, b, r2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a, b = np.polyfit(x, y, 1)
    resid = y - (a * x + b)
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(a), float(b), r2


def power_fit(x, y) -> tuple[float, float]:
    """Fit y = C * x^kappa on positive data; returns (kappa, r2)."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    kappa, _, r2 = affine_fit(lx, ly)
    return kappa, r2


# ---------------------------------------------------------------------------
# epsilon-family convergence

@dataclass
class ConvergenceRun:
    config: LabConfig
    eps_list: tuple[float, ...]
    gamma_list: tuple[float, ...]
    distances: dict  # (eps, gamma) -> sup_t H^gamma distance to reference
    kappa_hat: dict  # gamma -> fitted self-convergence rate
    C_eps_list: list[float]
    modulus_distances: dict  # (eps, gamma) -> sup_t ||.||_{H^gamma cap Linf}
    reference_reports: list[EnergyReport]
    failed: bool = False
    failure_info: dict | None = None

    def distances_rows(self) -> list[list]:
        rows = []
        for gamma in self.gamma_list:
            kap = self.kappa_hat.get(gamma, float("nan"))
            for eps in self.eps_list:
                rows.append([eps, gamma, self.distances[(eps, gamma)], kap])
        return rows


def _family_trajectory(cfg: LabConfig, noise, v0: SpectralField,
                       snapshot_hook) -> None:
    """Evolve the u-equation and call snapshot_hook(index, v_state, u_state)."""
    state = prepared_initial_datum(v0, noise, cfg.p, cfg.lam,
                                   renormalize_phase=cfg.renormalize_phase)
    n_steps = round(cfg.T / cfg.dt)
    stride = max(1, n_steps // cfg.snapshot_count)
    snapshot_hook(0, to_v(state), state)
    idx = 1
    for k in range(n_steps):
        state = strang_step_u(state, cfg.dt)
        if (k + 1) % stride == 0 or k + 1 == n_steps:
            snapshot_hook(idx, to_v(state), state)
            idx += 1


def run_epsilon_family(cfg: LabConfig) -> ConvergenceRun:
    """Single-omega convergence experiment across the epsilon family.

    Every member shares the grid and Gaussian coefficients; each is evolved in
    the u-gauge by Strang splitting, gauged back with its own C_eps phase, and
    compared to the smallest-epsilon member at common snapshot times.
    """
    grid = get_grid(cfg.N)
    moll = Mollifier(cfg.mollifier)
    coeffs = sample_gaussian(cfg.seed, cfg.stream_id, cfg.N)
    v0 = make_datum(cfg.datum, grid, cfg.amplitude)
    eps_ref = min(cfg.epsilon_list)
    mod_gammas = tuple(g for g in cfg.gamma_list if g < 1.0)

    noise_ref = build_noise(coeffs, moll, eps_ref)
    expY_neg = np.exp(-noise_ref.Y.samples_real())  # e^{-Y}, shared across eps

    ref_v_samples: list[np.ndarray] = []
    reference_reports: list[EnergyReport] = []

    def ref_hook(idx, v_state, u_state):
        ref_v_samples.append(v_state.field.to_physical())
        reference_reports.append(evaluate_report(v_state))

    _family_trajectory(cfg, noise_ref, v0, ref_hook)

    distances: dict = {}
    modulus: dict = {}
    C_list: list[float] = []
    failed = False
    failure_info = None

    for eps in cfg.epsilon_list:
        noise = build_noise(coeffs, moll, eps)
        C_list.append(noise.C_eps)
        sup_d = {g: 0.0 for g in cfg.gamma_list}
        sup_m = {g: 0.0 for g in mod_gammas}

        def hook(idx, v_state, u_state, sup_d=sup_d, sup_m=sup_m):
            v_samples = v_state.field.to_physical()
            diff = to_spectral(v_samples - ref_v_samples[idx], grid)
            for g in cfg.gamma_list:
                sup_d[g] = max(sup_d[g], sobolev_norm(diff, g, 2))
            mod_diff = (np.abs(u_state.field.to_physical())
                        - expY_neg * np.abs(ref_v_samples[idx]))
            mfield = to_spectral(mod_diff, grid)
            for g in mod_gammas:
                val = max(sobolev_norm(mfield, g, 2), lq_norm(mfield, np.inf))
                sup_m[g] = max(sup_m[g], val)

        try:
            # the reference member reruns bit-identically, so its v-distance
            # row comes out exactly zero; its modulus residual is still real
            _family_trajectory(cfg, noise, v0, hook)
        except (RuntimeError, FloatingPointError) as err:
            failed = True
            failure_info = {"eps": eps, "error": str(err)}
            for g in cfg.gamma_list:
                sup_d.setdefault(g, float("nan"))

        for g in cfg.gamma_list:
            distances[(eps, g)] = sup_d[g]
        for g in mod_gammas:
            modulus[(eps, g)] = sup_m[g]

    kappa_hat = {}
    for g in cfg.gamma_list:
        pts = [(e, distances[(e, g)]) for e in cfg.epsilon_list
               if e != eps_ref and distances[(e, g)] > 0 and math.isfinite(distances[(e, g)])]
        if len(pts) >= 2:
            kappa, _ = power_fit([p[0] for p in pts], [p[1] for p in pts])
            kappa_hat[g] = kappa
        else:
            kappa_hat[g] = float("nan")

    return ConvergenceRun(
        config=cfg, eps_list=cfg.epsilon_list, gamma_list=cfg.gamma_list,
        distances=distances, kappa_hat=kappa_hat, C_eps_list=C_list,
        modulus_distances=modulus, reference_reports=reference_reports,
        failed=failed, failure_info=failure_info,
    )


def modulus_comparison(run_result: ConvergenceRun) -> list[list]:
    """Table rows (eps, gamma, sup_t ||...||_{H^gamma cap Linf}) per (diff)."""
    rows = []
    for (eps, g), val in sorted(run_result.modulus_distances.items(),
                                key=lambda kv: (kv[0][1], -kv[0][0])):
        rows.append([eps, g, val])
    return rows


# ---------------------------------------------------------------------------
# Monte Carlo noise statistics

def run_noise_stats(cfg: LabConfig, s: float = 0.5, q: float = 4.0) -> list[dict]:
    """Medians/deciles over seeds of the noise-field norms, with fits.

    Emits rows for stats.csv: per (eps, norm_name) the median, 10th and 90th
    percentiles; fit_slope/r2 carry the affine-in-|ln eps| fit for the
    gradient norm and the power-law-in-eps fit for the difference norms.
    """
    if cfg.sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    moll = Mollifier(cfg.mollifier)
    eps_list = cfg.epsilon_list
    norm_names = ("grad_Y_eps_Lq", "Y_diff_Wsq", "wick_diff_Wmsq",
                  "exp_Y_Linf", "exp_negY_Linf")
    samples: dict[tuple[float, str], list[float]] = {
        (e, n): [] for e in eps_list for n in norm_names}

    for k in range(cfg.sample_count):
        coeffs = sample_gaussian(cfg.seed, cfg.stream_id + k, cfg.N)
        for eps in eps_list:
            noise = build_noise(coeffs, moll, eps)
            g1, g2 = noise.grad_Y_eps
            grad_abs = np.hypot(g1.samples_real(), g2.samples_real())
            gnorm = float((np.sum(grad_abs**q) * noise.grid.quad_weight) ** (1.0 / q))
            ydiff = SpectralField(noise.grid, noise.Y_eps.coeffs - noise.Y.coeffs)
            wdiff = SpectralField(noise.grid, noise.wick_eps.coeffs - noise.wick_limit.coeffs)
            y_samp = noise.Y_eps.samples_real()
            samples[(eps, "grad_Y_eps_Lq")].append(gnorm)
            samples[(eps, "Y_diff_Wsq")].append(sobolev_norm(ydiff, s, q))
            samples[(eps, "wick_diff_Wmsq")].append(sobolev_norm(wdiff, -s, q))
            samples[(eps, "exp_Y_Linf")].append(float(np.exp(np.max(y_samp))))
            samples[(eps, "exp_negY_Linf")].append(float(np.exp(-np.min(y_samp))))

    def quantiles(vals):
        arr = np.asarray(vals)
        return (float(np.median(arr)), float(np.percentile(arr, 10)),
                float(np.percentile(arr, 90)))

    fits: dict[str, tuple[float, float]] = {}
    medians = {name: [quantiles(samples[(e, name)])[0] for e in eps_list]
               for name in norm_names}
    ln_inv_eps = [abs(math.log(e)) for e in eps_list]
    slope, _, r2 = affine_fit(ln_inv_eps, medians["grad_Y_eps_Lq"])
    fits["grad_Y_eps_Lq"] = (slope, r2)
    for name in ("Y_diff_Wsq", "wick_diff_Wmsq"):
        kappa, r2p = power_fit(list(eps_list), medians[name])
        fits[name] = (kappa, r2p)

    rows = []
    for name in norm_names:
        f = fits.get(name, (float("nan"), float("nan")))
        for eps in eps_list:
            med, p10, p90 = quantiles(samples[(eps, name)])
            rows.append({
                "eps": eps, "q": q, "s": s, "norm_name": name,
                "median": med, "p10": p10, "p90": p90,
                "fit_slope": f[0], "r2": f[1],
            })
    return rows


# ---------------------------------------------------------------------------
# uniqueness / cross-integrator probe

def uniqueness_probe(cfg: LabConfig, gamma: float = 0.5,
                     dt_list: tuple[float, ...] | None = None) -> dict:
    """Same Cauchy problem integrated two independent ways.

    For each dt: evolve the u-equation by Strang and gauge the snapshots, and
    evolve the v-equation directly by Lawson RK4; report the sup-in-time
    H^gamma distance.  The gap must shrink under joint dt refinement.
    """
    grid = get_grid(cfg.N)
    moll = Mollifier(cfg.mollifier)
    coeffs = sample_gaussian(cfg.seed, cfg.stream_id, cfg.N)
    eps = cfg.epsilon_list[0]
    noise = build_noise(coeffs, moll, eps)
    v0 = make_datum(cfg.datum, grid, cfg.amplitude)
    dts = dt_list if dt_list is not None else (cfg.dt,)

    gaps = {}
    for dt in dts:
        n_steps = round(cfg.T / dt)
        stride = max(1, n_steps // cfg.snapshot_count)

        u_state = prepared_initial_datum(v0, noise, cfg.p, cfg.lam)
        v_state = to_v(u_state)
        sup = 0.0
        for k in range(n_steps):
            u_state = strang_step_u(u_state, dt)
            v_state = ifrk4_step_v(v_state, dt)
            if (k + 1) % stride == 0 or k + 1 == n_steps:
                gauged = to_v(u_state)
                diff = SpectralField(grid, gauged.field.coeffs - v_state.field.coeffs)
                sup = max(sup, sobolev_norm(diff, gamma, 2))
        gaps[dt] = sup
    return {"eps": eps, "gamma": gamma, "gaps": gaps}


# ---------------------------------------------------------------------------
# master-identity residual sweep

def identity_residuals(cfg: LabConfig, dt_list: tuple[float, ...] = (2e-3, 1e-3, 5e-4),
                       warmup_steps: int = 40, warmup_dt: float = 5e-4) -> list[dict]:
    """Centered-difference residual |dE/dt - lam*H| at one interior time,
    for each probe dt.  Emits rows for identity.csv; the residual shrinks at
    O(dt^2) when every term of F, G and H is correct.
    """
    grid = get_grid(cfg.N)
    moll = Mollifier(cfg.mollifier)
    coeffs = sample_gaussian(cfg.seed, cfg.stream_id, cfg.N)
    noise = build_noise(coeffs, moll, cfg.epsilon_list[0])
    v0 = make_datum(cfg.datum, grid, cfg.amplitude)
    base = to_v(prepared_initial_datum(v0, noise, cfg.p, cfg.lam))
    # step off t = 0, where the residual super-converges for real data
    for _ in range(warmup_steps):
        base = ifrk4_step_v(base, warmup_dt)

    rows = []
    for dt in dt_list:
        cur = ifrk4_step_v(base, dt)
        nxt = ifrk4_step_v(cur, dt)
        dE = (modified_energy_E(nxt) - modified_energy_E(base)) / (2 * dt)
        rows.append({"dt": dt, "residual": abs(dE - cfg.lam * defect_H(cur))})
    return rows


# ---------------------------------------------------------------------------
# persistence

def write_manifest(outdir: Path, cfg: LabConfig, extra: dict | None = None) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    data = cfg.to_manifest()
    if extra:
        data.update(extra)
    path = outdir / "manifest.json"
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return path


def write_distances_csv(outdir: Path, run_result: ConvergenceRun) -> Path:
    path = outdir / "distances.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["eps", "gamma", "sup_dist", "kappa_hat"])
        for row in run_result.distances_rows():
            w.writerow([f"{row[0]:.10g}", f"{row[1]:.10g}",
                        f"{row[2]:.12g}", f"{row[3]:.6g}"])
    return path


def write_modulus_csv(outdir: Path, run_result: ConvergenceRun) -> Path:
    path = outdir / "modulus.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["eps", "gamma", "sup_dist"])
        for eps, g, val in modulus_comparison(run_result):
            w.writerow([f"{eps:.10g}", f"{g:.10g}", f"{val:.12g}"])
    return path


def write_energy_csv(outdir: Path, reports: list[EnergyReport]) -> Path:
    path = outdir / "energy.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(EnergyReport.CSV_COLUMNS)
        for r in reports:
            w.writerow([f"{x:.12g}" for x in r.csv_row()])
    return path


def write_identity_csv(outdir: Path, rows: list[dict]) -> Path:
    path = outdir / "identity.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["dt", "residual"])
        for r in rows:
            w.writerow([f"{r['dt']:.10g}", f"{r['residual']:.12g}"])
    return path


def write_stats_csv(outdir: Path, rows: list[dict]) -> Path:
    path = outdir / "stats.csv"
    cols = ["eps", "q", "s", "norm_name", "median", "p10", "p90", "fit_slope", "r2"]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for r in rows:
            w.writerow([r[c] if isinstance(r[c], str) else f"{r[c]:.10g}" for c in cols])
    return path
