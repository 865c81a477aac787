"""Unitary time evolution: exact propagators, the left-endpoint stepped product
for time-dependent Hamiltonians, and first-order expectation updates."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .opcore import HermitianOperator, StateVector, commutator, expectation, op_norm, spectrum

Schedule = Union[HermitianOperator, Callable[[float], HermitianOperator]]


@dataclass(frozen=True)
class EvolutionSpec:
    hamiltonian: Schedule
    t0: float
    t1: float
    step: float
    hbar: float = 1.0

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.t1 < self.t0:
            raise ValueError("t1 must not precede t0")

    def at(self, t: float) -> HermitianOperator:
        h = self.hamiltonian
        return h if isinstance(h, HermitianOperator) else h(t)


def propagator(H: HermitianOperator, dt: float, hbar: float = 1.0) -> np.ndarray:
    """exp(-i H dt / hbar) through the spectral decomposition."""
    sp = spectrum(H)
    phases = np.exp(-1j * sp.values * (dt / hbar))
    return (sp.vectors * phases) @ sp.vectors.conj().T


def stepped_propagator(spec: EvolutionSpec) -> np.ndarray:
    """Ordered product V(t+T-eps)...V(t+eps)V(t) with left-endpoint Hamiltonians.

    A final partial step covers any remainder of (t1 - t0) / step.
    """
    total = spec.t1 - spec.t0
    n_full = int(np.floor(total / spec.step + 1e-9))
    dim = spec.at(spec.t0).dim
    U = np.eye(dim, dtype=complex)
    t = spec.t0
    for k in range(n_full):
        U = propagator(spec.at(t), spec.step, spec.hbar) @ U
        t = spec.t0 + (k + 1) * spec.step
    rest = spec.t1 - t
    if rest > 1e-12 * max(1.0, abs(spec.t1)):
        U = propagator(spec.at(t), rest, spec.hbar) @ U
    return U


def evolve(v: StateVector, U: np.ndarray) -> StateVector:
    return StateVector.normalized(U @ v.amplitudes)


def energy_drift(H: HermitianOperator, v0: StateVector, T: float, hbar: float = 1.0,
                 n_times: int = 101) -> float:
    """max_t |<H>_t - <H>_0| on a uniform grid over [0, T]."""
    e0 = expectation(H, v0)
    sp = spectrum(H)
    coeffs = sp.vectors.conj().T @ v0.amplitudes
    worst = 0.0
    for t in np.linspace(0.0, T, n_times):
        vt = sp.vectors @ (np.exp(-1j * sp.values * t / hbar) * coeffs)
        worst = max(worst, abs(float(np.vdot(vt, H.matrix @ vt).real) - e0))
    return worst


def heisenberg_step_expectation(A: HermitianOperator, H: HermitianOperator, v: StateVector,
                                dt: float, hbar: float = 1.0) -> float:
    """First-order prediction <A> + (i/hbar) dt <[H, A]> of <A> after dt."""
    c = commutator(H, A)
    x = v.amplitudes
    return expectation(A, v) + float(((1j / hbar) * dt * np.vdot(x, c @ x)).real)


def exact_step_expectation(A: HermitianOperator, H: HermitianOperator, v: StateVector,
                           dt: float, hbar: float = 1.0) -> float:
    return expectation(A, evolve(v, propagator(H, dt, hbar)))


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(y) against log(x)."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])


def self_convergence(spec: EvolutionSpec, steps: Sequence[float]) -> tuple[list[float], float]:
    """Errors |U(eps) - U(eps/2)| for each eps and their log-log slope."""
    errs = []
    for eps in steps:
        a = stepped_propagator(EvolutionSpec(spec.hamiltonian, spec.t0, spec.t1, eps, spec.hbar))
        b = stepped_propagator(EvolutionSpec(spec.hamiltonian, spec.t0, spec.t1, eps / 2, spec.hbar))
        errs.append(op_norm(a - b))
    return errs, loglog_slope(steps, errs)


def unitarity_defect(U: np.ndarray) -> float:
    return op_norm(U.conj().T @ U - np.eye(U.shape[0]))
