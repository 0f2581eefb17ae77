"""Discrete torus geometry and Fourier analysis on [-pi, pi)^2.

Convention: a field is the finite series f(x) = sum_n fhat_n e^{i n.x} over the
lattice Lambda_N = { n in Z^2 : -N/2 <= n_i < N/2 }.  Coefficients are stored in
numpy FFT order.  All quadratures use the uniform node weight (2*pi/N)^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "TorusGrid",
    "SpectralField",
    "to_spectral",
    "to_physical",
    "apply_Ds",
    "lq_norm",
    "sobolev_norm",
    "gradient",
    "laplacian",
    "resample_coeffs",
]

REALNESS_TOL = 1e-12


class TorusGrid:
    """Uniform N x N grid on the torus identified with (-pi, pi) x (-pi, pi).

    Nodes are x_j = (-pi + 2*pi*j1/N, -pi + 2*pi*j2/N); the represented
    frequency set is Lambda_N in numpy FFT order.
    """

    def __init__(self, modes_per_dim: int):
        N = int(modes_per_dim)
        if N < 8 or N % 2 != 0:
            raise ValueError(f"modes_per_dim must be even and >= 8, got {N}")
        self.N = N
        x1d = -np.pi + 2.0 * np.pi * np.arange(N) / N
        self.x1, self.x2 = np.meshgrid(x1d, x1d, indexing="ij")
        n1d = np.fft.fftfreq(N, d=1.0 / N).astype(np.int64)
        self.n1, self.n2 = np.meshgrid(n1d, n1d, indexing="ij")
        self.nsq = (self.n1**2 + self.n2**2).astype(np.float64)
        self.bracket = np.sqrt(1.0 + self.nsq)  # <n> = (1+|n|^2)^(1/2)
        # phase relating FFT indexing (origin at j=0) to nodes starting at -pi
        self.phase = ((-1.0) ** (self.n1 + self.n2)).astype(np.float64)
        self.quad_weight = (2.0 * np.pi / N) ** 2
        # Nyquist rows n_i == -N/2 have no conjugate partner on the lattice
        self.nyquist_mask = (self.n1 == -N // 2) | (self.n2 == -N // 2)

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusGrid) and other.N == self.N

    def __hash__(self) -> int:
        return hash(("TorusGrid", self.N))

    def __repr__(self) -> str:
        return f"TorusGrid(N={self.N})"


_GRID_CACHE: dict[int, TorusGrid] = {}


def get_grid(N: int) -> TorusGrid:
    if N not in _GRID_CACHE:
        _GRID_CACHE[N] = TorusGrid(N)
    return _GRID_CACHE[N]


@dataclass(eq=False)
class SpectralField:
    """Complex function on the torus stored by Fourier coefficients.

    ``coeffs`` follows numpy FFT ordering on the grid's frequency lattice.
    ``realness_flag`` asserts Hermitian symmetry fhat_{-n} = conj(fhat_n).
    """

    grid: TorusGrid
    coeffs: NDArray[np.complex128]
    realness_flag: bool = False

    def __post_init__(self):
        if self.coeffs.shape != (self.grid.N, self.grid.N):
            raise ValueError(
                f"coefficient shape {self.coeffs.shape} does not match grid N={self.grid.N}"
            )
        if self.realness_flag:
            err = hermitian_defect(self.grid, self.coeffs)
            scale = np.max(np.abs(self.coeffs))
            if scale > 0 and err > REALNESS_TOL * scale:
                raise ValueError(f"realness_flag set but Hermitian defect {err:.3e} > tol")

    def to_physical(self, oversample: int = 1) -> NDArray[np.complex128]:
        """Node samples, optionally on an oversample*N grid (zero padding)."""
        if oversample == 1:
            c = self.coeffs
            g = self.grid
        else:
            g = get_grid(self.grid.N * oversample)
            c = resample_coeffs(self.coeffs, g.N)
        return np.fft.ifft2(c * g.phase) * g.N**2

    def samples_real(self, oversample: int = 1) -> NDArray[np.float64]:
        return self.to_physical(oversample).real

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy(), self.realness_flag)


def hermitian_defect(grid: TorusGrid, coeffs: NDArray[np.complex128]) -> float:
    """max_n |fhat_n - conj(fhat_{-n})|, counting Nyquist modes as unpaired."""
    mirrored = np.conj(coeffs[::-1, ::-1])
    mirrored = np.roll(mirrored, (1, 1), axis=(0, 1))  # index -n on the lattice
    defect = np.abs(coeffs - mirrored)
    # a mode whose mirror leaves the lattice must itself vanish
    defect[grid.nyquist_mask] = np.abs(coeffs[grid.nyquist_mask])
    return float(np.max(defect))


def to_spectral(samples: NDArray, grid: TorusGrid, realness_flag: bool = False) -> SpectralField:
    """Forward transform from node samples to the coefficient representation."""
    samples = np.asarray(samples)
    if samples.shape != (grid.N, grid.N):
        raise ValueError(f"sample shape {samples.shape} does not match grid N={grid.N}")
    coeffs = np.fft.fft2(samples.astype(np.complex128)) * grid.phase / grid.N**2
    return SpectralField(grid, coeffs, realness_flag)


def to_physical(f: SpectralField, oversample: int = 1) -> NDArray[np.complex128]:
    return f.to_physical(oversample)


def resample_coeffs(coeffs: NDArray[np.complex128], N_out: int) -> NDArray[np.complex128]:
    """Re-index coefficients onto a different even lattice size.

    Upsampling zero-pads the new high modes; downsampling discards modes
    outside the smaller lattice (spectral truncation).
    """
    N_in = coeffs.shape[0]
    if N_out == N_in:
        return coeffs.copy()
    out = np.zeros((N_out, N_out), dtype=np.complex128)
    h = min(N_in, N_out) // 2
    # four corner blocks of the FFT layout carry frequencies in [-h, h)
    out[:h, :h] = coeffs[:h, :h]
    out[:h, -h:] = coeffs[:h, -h:]
    out[-h:, :h] = coeffs[-h:, :h]
    out[-h:, -h:] = coeffs[-h:, -h:]
    if N_out < N_in:
        # the coarse Nyquist rows lose their conjugate partners; zero them so
        # truncation of a real field stays real
        grid_out = get_grid(N_out)
        out[grid_out.nyquist_mask] = 0.0
    return out


def truncate_to(samples: NDArray, fine_grid: TorusGrid, grid: TorusGrid,
                realness_flag: bool = False) -> SpectralField:
    """Transform fine-grid samples and truncate the result onto ``grid``."""
    fine = to_spectral(samples, fine_grid)
    coeffs = resample_coeffs(fine.coeffs, grid.N)
    return SpectralField(grid, coeffs, realness_flag)


def apply_Ds(f: SpectralField, s: float) -> SpectralField:
    """Fractional Bessel multiplier D^s: fhat_n -> <n>^s fhat_n."""
    if s == 0.0:
        return f.copy()
    return SpectralField(f.grid, f.coeffs * f.grid.bracket**s, f.realness_flag)


def lq_norm(f: SpectralField, q: float, weight: SpectralField | None = None,
            oversample: int = 1) -> float:
    """Quadrature L^q norm (integral of |f|^q w)^(1/q); q = inf gives max |f|.

    The optional weight must be a real, nonnegative field; it is disallowed
    for q = inf.
    """
    if q != np.inf and q < 1:
        raise ValueError(f"q must be >= 1 or inf, got {q}")
    vals = np.abs(f.to_physical(oversample))
    if q == np.inf:
        if weight is not None:
            raise ValueError("weight is not supported for the L^inf norm")
        return float(np.max(vals))
    g = f.grid if oversample == 1 else get_grid(f.grid.N * oversample)
    if weight is not None:
        w = weight.to_physical(oversample).real
        if np.min(w) < -1e-12 * max(1.0, np.max(np.abs(w))):
            raise ValueError("weight must be nonnegative at all nodes")
        w = np.maximum(w, 0.0)
    else:
        w = 1.0
    return float((np.sum(vals**q * w) * g.quad_weight) ** (1.0 / q))


def sobolev_norm(f: SpectralField, s: float, q: float, oversample: int = 1) -> float:
    """W^{s,q} norm: the L^q norm of D^s f.  Negative s gives W^{-s,q}."""
    return lq_norm(apply_Ds(f, s), q, oversample=oversample)


def gradient(f: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Partial derivatives via the multipliers i*n_i; Nyquist rows zeroed."""
    g = f.grid
    keep = ~g.nyquist_mask
    d1 = SpectralField(g, 1j * g.n1 * f.coeffs * keep)
    d2 = SpectralField(g, 1j * g.n2 * f.coeffs * keep)
    return d1, d2


def laplacian(f: SpectralField) -> SpectralField:
    return SpectralField(f.grid, -f.grid.nsq * f.coeffs, f.realness_flag)


def random_trig_poly(grid: TorusGrid, max_mode: int, rng: np.random.Generator,
                     real: bool = False, decay: float = 0.0) -> SpectralField:
    """Random band-limited field with modes |n_i| <= max_mode (test helper)."""
    coeffs = np.zeros((grid.N, grid.N), dtype=np.complex128)
    sel = (np.abs(grid.n1) <= max_mode) & (np.abs(grid.n2) <= max_mode)
    draws = (rng.standard_normal(int(sel.sum())) + 1j * rng.standard_normal(int(sel.sum())))
    coeffs[sel] = draws / np.sqrt(2.0)
    if decay > 0.0:
        coeffs *= grid.bracket**(-decay)
    if real:
        mirrored = np.roll(np.conj(coeffs[::-1, ::-1]), (1, 1), axis=(0, 1))
        coeffs = 0.5 * (coeffs + mirrored)
        coeffs[grid.nyquist_mask] = 0.0
    return SpectralField(grid, coeffs, realness_flag=real)
