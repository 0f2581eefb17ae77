"""Spatial white noise on the torus and every derived stochastic object.

The randomness is a Hermitian-symmetric family of standard complex Gaussians
g_n on the lattice (zero mode removed).  From it we build the mollified noise
xi_eps, the potentials Y and Y_eps = Delta^{-1} xi_eps, the renormalization
constant C_eps and the Wick square |grad Y_eps|^2 - C_eps together with its
lattice limit object.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy import integrate, interpolate, special

from .spectral import (
    SpectralField,
    TorusGrid,
    get_grid,
    gradient,
    truncate_to,
)

__all__ = [
    "GaussianCoeffs",
    "Mollifier",
    "NoiseRealization",
    "sample_gaussian",
    "build_noise",
    "compute_C_eps",
    "wick_square",
    "wick_limit_field",
    "exp_field",
]

EXP_ARG_LIMIT = 200.0


@dataclass(eq=False)
class GaussianCoeffs:
    """Hermitian family of standard complex Gaussians g_n, n in Lambda_N \\ {0}.

    ``g`` is stored as a full FFT-ordered array with g_{-n} = conj(g_n),
    g_0 = 0 and Nyquist rows zeroed (they have no conjugate partner).
    Regeneration from (seed, stream_id, N) is bit-identical.
    """

    seed: int
    stream_id: int
    N: int
    g: NDArray[np.complex128]

    @property
    def grid(self) -> TorusGrid:
        return get_grid(self.N)

    def to_json_dict(self) -> dict:
        """Portable (n1, n2, re, im) dump for cross-implementation checks."""
        grid = self.grid
        sel = np.abs(self.g) > 0
        return {
            "seed": self.seed,
            "stream_id": self.stream_id,
            "N": self.N,
            "entries": [
                [int(a), int(b), float(z.real), float(z.imag)]
                for a, b, z in zip(grid.n1[sel], grid.n2[sel], self.g[sel])
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "GaussianCoeffs":
        grid = get_grid(int(data["N"]))
        g = np.zeros((grid.N, grid.N), dtype=np.complex128)
        for a, b, re, im in data["entries"]:
            i = a % grid.N
            j = b % grid.N
            g[i, j] = re + 1j * im
        return cls(int(data["seed"]), int(data["stream_id"]), int(data["N"]), g)


def _half_lattice_mask(grid: TorusGrid) -> NDArray[np.bool_]:
    """Fixed half-space (n1 > 0) union (n1 = 0, n2 > 0), Nyquist excluded."""
    mask = (grid.n1 > 0) | ((grid.n1 == 0) & (grid.n2 > 0))
    return mask & ~grid.nyquist_mask


def sample_gaussian(seed: int, stream_id: int, N: int) -> GaussianCoeffs:
    """Draw g_n i.i.d. standard complex Gaussian on a half lattice and mirror.

    Real and imaginary parts each have variance 1/2, so E|g_n|^2 = 1.
    """
    grid = get_grid(N)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(stream_id,)))
    draws = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    draws /= np.sqrt(2.0)
    g = np.zeros((N, N), dtype=np.complex128)
    half = _half_lattice_mask(grid)
    g[half] = draws[half]
    mirrored = np.roll(np.conj(g[::-1, ::-1]), (1, 1), axis=(0, 1))
    g = g + mirrored  # disjoint supports: half lattice and its reflection
    return GaussianCoeffs(seed=seed, stream_id=stream_id, N=N, g=g)


def _bump_profile(r: NDArray[np.float64]) -> NDArray[np.float64]:
    """Unnormalized C_c^inf bump chi(|x|) supported in |x| < 1/2."""
    out = np.zeros_like(r)
    inside = np.abs(r) < 0.5
    u = 2.0 * r[inside]
    out[inside] = np.exp(-1.0 / (1.0 - u**2))
    return out


def _bump_rho_table(z_max: float, num: int = 2048) -> interpolate.interp1d:
    """Radial Fourier transform of the normalized bump, tabulated on [0, z_max].

    rho(z) = 2*pi * int_0^{1/2} chi(r) J0(|z| r) r dr / norm, so rho(0) = 1.
    """
    def hankel(zr: float) -> float:
        val, _ = integrate.quad(
            lambda r: _bump_profile(np.array([r]))[0] * special.j0(zr * r) * r,
            0.0, 0.5, limit=200)
        return 2.0 * np.pi * val

    norm = hankel(0.0)
    zs = np.linspace(0.0, z_max, num)
    vals = np.array([hankel(z) for z in zs]) / norm
    return interpolate.interp1d(zs, vals, kind="cubic", bounds_error=False, fill_value=0.0)


@dataclass(eq=False)
class Mollifier:
    """Fourier-side mollifier profile rho with rho(0) = 1 and rho even.

    ``evaluator`` maps arrays (z1, z2) to rho(z) values.  The three stock
    kinds are radial: a Gaussian profile, a sharp cutoff (closed-form lattice
    sums, handy in tests) and the numerically transformed compactly supported
    bump; a custom evaluator may be supplied directly.
    """

    kind: str
    evaluator: Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.float64]] | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.evaluator is None:
            if self.kind == "gaussian_rho":
                self.evaluator = lambda z1, z2: np.exp(
                    -(np.asarray(z1, dtype=float) ** 2 + np.asarray(z2, dtype=float) ** 2) / 2.0)
            elif self.kind == "sharp_cutoff_rho":
                self.evaluator = lambda z1, z2: (
                    np.hypot(np.asarray(z1, dtype=float), np.asarray(z2, dtype=float)) <= 1.0
                ).astype(float)
            elif self.kind == "bump_chi_numeric":
                self.evaluator = self._bump_eval
            else:
                raise ValueError(f"unknown mollifier kind {self.kind!r} without evaluator")
        r0 = float(np.asarray(self.evaluator(np.array([0.0]), np.array([0.0])))[0])
        if abs(r0 - 1.0) > 1e-10:
            raise ValueError(f"rho(0) must equal 1, got {r0}")

    def _bump_eval(self, z1: NDArray[np.float64], z2: NDArray[np.float64]) -> NDArray[np.float64]:
        r = np.atleast_1d(np.hypot(np.asarray(z1, dtype=float), np.asarray(z2, dtype=float)))
        table = self._cache.get("table")
        if table is None or table.x[-1] < float(np.max(r)):
            self._cache["table"] = table = _bump_rho_table(max(64.0, float(np.max(r)) * 1.01))
        return table(r)

    def on_lattice(self, grid: TorusGrid, epsilon: float) -> NDArray[np.float64]:
        """rho(eps * n) evaluated over the grid's frequency lattice."""
        return np.asarray(
            self.evaluator(epsilon * grid.n1, epsilon * grid.n2), dtype=float)


@dataclass(eq=False)
class NoiseRealization:
    """All derived fields of one (omega, epsilon): xi_eps, Y, Y_eps, the Wick
    square and its limit object, plus the constant C_eps."""

    coeffs: GaussianCoeffs
    mollifier: Mollifier
    epsilon: float
    xi_eps: SpectralField
    Y: SpectralField
    Y_eps: SpectralField
    grad_Y_eps: tuple[SpectralField, SpectralField]
    C_eps: float
    wick_eps: SpectralField
    wick_limit: SpectralField
    _phys_cache: dict = field(default_factory=dict, repr=False)

    @property
    def grid(self) -> TorusGrid:
        return self.coeffs.grid

    def exp_weight(self, scale: float, oversample: int = 1) -> NDArray[np.float64]:
        """Exact pointwise e^{scale * Y_eps} node values (not truncated).

        Cached per (scale, oversample); used as quadrature weight so that
        relations like grad(e^{aY}) = a grad(Y) e^{aY} hold exactly pointwise.
        """
        key = (float(scale), int(oversample))
        if key not in self._phys_cache:
            y = self.Y_eps.samples_real(oversample)
            arg = scale * y
            if np.max(np.abs(arg)) > EXP_ARG_LIMIT:
                raise OverflowError("exponent magnitude exceeds overflow guard")
            self._phys_cache[key] = np.exp(arg)
        return self._phys_cache[key]

    def phys(self, name: str, oversample: int = 1) -> NDArray[np.float64]:
        """Cached real node samples of a derived field on the requested grid."""
        key = (name, int(oversample))
        if key not in self._phys_cache:
            fields = {
                "xi_eps": self.xi_eps,
                "Y_eps": self.Y_eps,
                "dY1": self.grad_Y_eps[0],
                "dY2": self.grad_Y_eps[1],
                "wick_eps": self.wick_eps,
            }
            self._phys_cache[key] = fields[name].samples_real(oversample)
        return self._phys_cache[key]


def compute_C_eps(mollifier: Mollifier, epsilon: float, N: int) -> float:
    """Lattice renormalization constant sum_{n in Lambda_N, n != 0} rho^2(eps n)/|n|^2."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    grid = get_grid(N)
    rho = mollifier.on_lattice(grid, epsilon)
    nz = grid.nsq > 0
    return float(np.sum(rho[nz] ** 2 / grid.nsq[nz]))


def _inverse_laplace_coeffs(grid: TorusGrid, rho_g: NDArray[np.complex128]) -> NDArray[np.complex128]:
    out = np.zeros_like(rho_g)
    nz = grid.nsq > 0
    out[nz] = -rho_g[nz] / grid.nsq[nz]
    return out


def _wick_from_gradient(grid: TorusGrid, d1: SpectralField, d2: SpectralField,
                        constant: float) -> SpectralField:
    """Pointwise |grad|^2 - constant on the doubled grid, truncated to Lambda_N."""
    fine = get_grid(2 * grid.N)
    g1 = d1.samples_real(2)
    g2 = d2.samples_real(2)
    vals = g1**2 + g2**2 - constant
    return truncate_to(vals, fine, grid, realness_flag=True)


def build_noise(coeffs: GaussianCoeffs, mollifier: Mollifier, epsilon: float) -> NoiseRealization:
    """Populate every derived field for one realization and mollification scale.

    Y (the "eps = 0" potential) uses rho = 1 across the whole represented
    lattice; the grid truncation itself plays the role of the regularization.
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    # epsilon > 1 is admitted so a sharp cutoff can empty the whole lattice
    # (useful as an exact zero-noise configuration)
    grid = coeffs.grid
    rho = mollifier.on_lattice(grid, epsilon)

    xi = SpectralField(grid, rho * coeffs.g, realness_flag=True)
    Y_eps = SpectralField(grid, _inverse_laplace_coeffs(grid, rho * coeffs.g), realness_flag=True)
    Y = SpectralField(grid, _inverse_laplace_coeffs(grid, coeffs.g), realness_flag=True)
    grad_Y_eps = gradient(Y_eps)
    C_eps = compute_C_eps(mollifier, epsilon, grid.N)

    wick_eps = _wick_from_gradient(grid, *grad_Y_eps, C_eps)
    nz = grid.nsq > 0
    C_limit = float(np.sum(1.0 / grid.nsq[nz]))
    wick_limit = _wick_from_gradient(grid, *gradient(Y), C_limit)

    return NoiseRealization(
        coeffs=coeffs, mollifier=mollifier, epsilon=epsilon,
        xi_eps=xi, Y=Y, Y_eps=Y_eps, grad_Y_eps=grad_Y_eps,
        C_eps=C_eps, wick_eps=wick_eps, wick_limit=wick_limit,
    )


def wick_square(noise: NoiseRealization) -> SpectralField:
    """Renormalized square |grad Y_eps|^2 - C_eps as a Lambda_N field."""
    return _wick_from_gradient(noise.grid, *noise.grad_Y_eps, noise.C_eps)


def wick_limit_field(coeffs: GaussianCoeffs, N: int) -> SpectralField:
    """Lattice limit object: off-diagonal double sum with kernel
    n1.n2/(|n1|^2 |n2|^2) plus the centered diagonal sum (|g_n|^2 - 1)/|n|^2.

    On the truncated lattice this is algebraically the rho = 1 Wick square,
    so it is evaluated through the same (oversampled) product route.
    """
    grid = get_grid(N)
    Y = SpectralField(grid, _inverse_laplace_coeffs(grid, coeffs.g), realness_flag=True)
    nz = grid.nsq > 0
    C_limit = float(np.sum(1.0 / grid.nsq[nz]))
    return _wick_from_gradient(grid, *gradient(Y), C_limit)


def wick_mean_coefficient(noise: NoiseRealization) -> float:
    """Zero-mode oracle sum rho^2(eps n)(|g_n|^2 - 1)/|n|^2."""
    grid = noise.grid
    rho = noise.mollifier.on_lattice(grid, noise.epsilon)
    nz = grid.nsq > 0
    return float(np.sum(rho[nz] ** 2 * (np.abs(noise.coeffs.g[nz]) ** 2 - 1.0) / grid.nsq[nz]))


def exp_field(Y_field: SpectralField, scale: float) -> SpectralField:
    """Pointwise e^{scale * Y} evaluated on the doubled grid, re-truncated."""
    grid = Y_field.grid
    fine = get_grid(2 * grid.N)
    y = Y_field.samples_real(2)
    if np.max(np.abs(scale * y)) > EXP_ARG_LIMIT:
        raise OverflowError("exponent magnitude exceeds overflow guard")
    return truncate_to(np.exp(scale * y), fine, grid, realness_flag=True)
