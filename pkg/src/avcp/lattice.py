"""Position, momentum and displacement on a periodic lattice.

Sites sit at x_n = a (n - M/2).  Momentum is diagonal in the discrete Fourier
basis with wavenumbers on (-pi/a, pi/a]; the Nyquist mode takes +pi/a.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .dynamics import propagator
from .errors import DomainError, InvalidWidth
from .opcore import HermitianOperator, StateVector, expectation, hermitian_from_matrix


@dataclass(frozen=True)
class LatticeConfig:
    M: int = 256
    a: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.M < 4:
            raise ValueError("lattice needs M >= 4 sites")
        if not self.a > 0:
            raise ValueError("lattice spacing must be positive")

    @property
    def x(self) -> np.ndarray:
        return self.a * (np.arange(self.M) - self.M / 2)

    @property
    def k(self) -> np.ndarray:
        """Wavenumbers in FFT order, Nyquist mode mapped to +pi/a."""
        k = 2 * np.pi * np.fft.fftfreq(self.M, d=self.a)
        if self.M % 2 == 0:
            k[self.M // 2] = np.pi / self.a
        return k


class _Ops:
    """Dense operators, built once per configuration."""

    def __init__(self, cfg: LatticeConfig):
        self.cfg = cfg

    @cached_property
    def fourier(self) -> np.ndarray:
        return np.fft.fft(np.eye(self.cfg.M), norm="ortho")

    @cached_property
    def X(self) -> HermitianOperator:
        return HermitianOperator(np.diag(self.cfg.x).astype(complex))

    @cached_property
    def P(self) -> HermitianOperator:
        F = self.fourier
        return hermitian_from_matrix(F.conj().T @ np.diag(self.cfg.hbar * self.cfg.k) @ F, tol=1e-12)

    @cached_property
    def D(self) -> HermitianOperator:
        return self.P.scale(1.0 / self.cfg.hbar)


_CACHE: dict[LatticeConfig, _Ops] = {}


def _ops(cfg: LatticeConfig) -> _Ops:
    if cfg not in _CACHE:
        _CACHE[cfg] = _Ops(cfg)
    return _CACHE[cfg]


def lattice_position(cfg: LatticeConfig) -> HermitianOperator:
    return _ops(cfg).X


def lattice_momentum(cfg: LatticeConfig) -> HermitianOperator:
    return _ops(cfg).P


def displacement_operator(cfg: LatticeConfig) -> HermitianOperator:
    return _ops(cfg).D


def plane_wave(cfg: LatticeConfig, m: int) -> StateVector:
    """Fourier mode m (FFT index), with momentum hbar * k[m]."""
    return StateVector(np.exp(2j * np.pi * m * np.arange(cfg.M) / cfg.M) / np.sqrt(cfg.M))


def translate(psi: StateVector, eps: float, cfg: LatticeConfig) -> StateVector:
    """exp(-i eps D) psi computed with the FFT; psi(x) -> psi(x - eps)."""
    phase = np.exp(-1j * eps * cfg.k)
    return StateVector.normalized(np.fft.ifft(phase * np.fft.fft(psi.amplitudes)))


def shift_compare(psi: StateVector, sites: int, cfg: LatticeConfig) -> float:
    """|roll(psi, sites) - exp(-i sites a D) psi| with no phase freedom."""
    U = propagator(displacement_operator(cfg), sites * cfg.a)
    return float(np.linalg.norm(np.roll(psi.amplitudes, sites) - U @ psi.amplitudes))


def bandlimited_shift(psi: StateVector, eps: float, cfg: LatticeConfig) -> np.ndarray:
    """Trigonometric interpolant of psi evaluated at x_n - eps, by direct summation."""
    n = np.arange(cfg.M)
    c = np.fft.fft(psi.amplitudes) / cfg.M
    # psi_n = sum_m c_m exp(i k_m a n)
    arg = cfg.k[None, :] * (cfg.a * n[:, None] - eps)
    return np.exp(1j * arg) @ c


def fractional_shift_residual(psi: StateVector, eps: float, cfg: LatticeConfig) -> float:
    return float(np.linalg.norm(translate(psi, eps, cfg).amplitudes - bandlimited_shift(psi, eps, cfg)))


def canonical_defect(psi: StateVector, cfg: LatticeConfig, scaled: bool = False) -> float:
    """|<[X, P]> - i hbar|, or |<[X, D]> - i| when ``scaled``."""
    X = lattice_position(cfg).matrix
    B = (displacement_operator(cfg) if scaled else lattice_momentum(cfg)).matrix
    v = psi.amplitudes
    val = np.vdot(X @ v, B @ v) - np.vdot(B @ v, X @ v)
    target = 1j if scaled else 1j * cfg.hbar
    return float(abs(val - target))


def gaussian_packet(cfg: LatticeConfig, center: float = 0.0, width: float = 8.0, k0: float = 0.0) -> StateVector:
    """Discretized exp(-(x - center)^2 / (4 width^2)) exp(i k0 x); ``width`` is the position spread."""
    if width < cfg.a:
        raise InvalidWidth(f"width {width} is below the lattice spacing {cfg.a}")
    if abs(k0) > np.pi / cfg.a:
        raise DomainError(f"carrier {k0} outside the Brillouin zone |k| <= {np.pi / cfg.a}")
    x = cfg.x
    psi = np.exp(-((x - center) ** 2) / (4 * width * width)) * np.exp(1j * k0 * x)
    return StateVector.normalized(psi)


def uniform_state(cfg: LatticeConfig) -> StateVector:
    return StateVector(np.full(cfg.M, 1 / np.sqrt(cfg.M), dtype=complex))


def mean_position(psi: StateVector, cfg: LatticeConfig) -> float:
    return float(np.sum(cfg.x * np.abs(psi.amplitudes) ** 2))


def mean_momentum(psi: StateVector, cfg: LatticeConfig) -> float:
    return expectation(lattice_momentum(cfg), psi)


def ehrenfest_rate(psi: StateVector, c: float, dt: float, cfg: LatticeConfig) -> float:
    """(<x>_{dt} - <x>_0) / dt under H = c P, evolved exactly."""
    H = lattice_momentum(cfg).scale(c)
    w = StateVector.normalized(propagator(H, dt, cfg.hbar) @ psi.amplitudes)
    return (mean_position(w, cfg) - mean_position(psi, cfg)) / dt


def shifted_position_check(cfg: LatticeConfig, eps: float) -> float:
    """X + eps I keeps X's eigenvectors with eigenvalues moved by eps."""
    X = lattice_position(cfg).matrix
    Y = X + eps * np.eye(cfg.M)
    return float(np.max(np.abs(Y - np.diag(cfg.x + eps))))
