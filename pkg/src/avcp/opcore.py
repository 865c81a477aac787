"""Dense linear algebra and projective-measurement primitives.

Everything here is immutable once built: arrays held by the dataclasses are
copied and flagged read-only, so operators and states can be shared freely
between workers.  Randomness is always passed in as a ``numpy.random.Generator``
obtained from :func:`make_stream`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    NotHermitian,
    NotReal,
    NumericalFailure,
)

HERMITICITY_TOL = 1e-12
NORM_TOL = 1e-12
REAL_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def op_norm(m: np.ndarray) -> float:
    """Spectral norm (largest singular value)."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    matrix: np.ndarray
    hermiticity_tolerance: float = HERMITICITY_TOL

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"operator must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator has non-finite entries")
        defect = op_norm(m - m.conj().T)
        if defect > self.hermiticity_tolerance * op_norm(m):
            raise NotHermitian(f"|M - M^dagger| = {defect:.3e} exceeds tolerance")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm(self) -> float:
        return op_norm(self.matrix)

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim}, norm={self.norm:.6g})"

    # light arithmetic; results are re-validated
    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        _check_dims(self.dim, other.dim)
        return HermitianOperator(self.matrix + other.matrix)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        _check_dims(self.dim, other.dim)
        return HermitianOperator(self.matrix - other.matrix)

    def scale(self, c: float) -> "HermitianOperator":
        return HermitianOperator(float(c) * self.matrix)


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if v.size == 0:
            raise DimensionMismatch("state must have dimension >= 1")
        n = np.linalg.norm(v)
        if abs(n - 1.0) > NORM_TOL:
            raise ValueError(f"state is not unit norm (|v| = {n!r})")
        object.__setattr__(self, "amplitudes", _frozen(v))

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        v = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(v / n)

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        v = np.zeros(dim, dtype=complex)
        v[index] = 1.0
        return cls(v)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __repr__(self):
        return f"StateVector(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigen-decomposition; ``vectors[:, i]`` belongs to ``values[i]``."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def states(self) -> list[StateVector]:
        return [StateVector(self.vectors[:, i]) for i in range(len(self.values))]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


@dataclass(frozen=True, eq=False)
class Outcome:
    value: float
    probability: float
    state: StateVector


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    outcomes: tuple[Outcome, ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([o.value for o in self.outcomes])

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([o.probability for o in self.outcomes])

    def mean(self) -> float:
        return float(self.values @ self.probabilities)

    def __len__(self):
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)


def _check_dims(*dims: int) -> None:
    if len(set(dims)) != 1:
        raise DimensionMismatch(f"dimension mismatch: {dims}")


def hermitian_from_matrix(m, tol: float = HERMITICITY_TOL) -> HermitianOperator:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got shape {m.shape}")
    scale = op_norm(m)
    defect = op_norm(m - m.conj().T)
    if defect > tol * scale:
        raise NotHermitian(f"|M - M^dagger| = {defect:.3e} exceeds {tol:g} * |M| = {tol * scale:.3e}")
    # symmetrize so downstream eigensolvers see an exactly Hermitian array
    return HermitianOperator(0.5 * (m + m.conj().T), hermiticity_tolerance=tol)


def spectrum(A: HermitianOperator) -> Spectrum:
    try:
        w, v = np.linalg.eigh(A.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver failed: {exc}") from exc
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    w.setflags(write=False)
    v.setflags(write=False)
    return Spectrum(values=w, vectors=v)


def apply_function(A: HermitianOperator, f: Callable[[float], float]) -> HermitianOperator:
    """Spectral calculus: sum_i f(a_i) v_i v_i^dagger."""
    sp = spectrum(A)
    fv = []
    for a in sp.values:
        try:
            y = f(float(a))
        except (ArithmeticError, ValueError) as exc:
            raise DomainError(f"f undefined at eigenvalue {a!r}: {exc}") from exc
        y = complex(y)
        if not np.isfinite(y) or abs(y.imag) > REAL_TOL * max(1.0, abs(y.real)):
            raise DomainError(f"f({a!r}) = {y!r} is not a finite real number")
        fv.append(y.real)
    fv = np.array(fv)
    return HermitianOperator((sp.vectors * fv) @ sp.vectors.conj().T)


def commutator(A, B) -> np.ndarray:
    a = A.matrix if isinstance(A, HermitianOperator) else np.asarray(A)
    b = B.matrix if isinstance(B, HermitianOperator) else np.asarray(B)
    _check_dims(a.shape[0], b.shape[0])
    return a @ b - b @ a


def expectation(A, v: StateVector, tol: float = REAL_TOL) -> float:
    a = A.matrix if isinstance(A, HermitianOperator) else np.asarray(A)
    _check_dims(a.shape[0], v.dim)
    x = v.amplitudes
    val = np.vdot(x, a @ x)
    if abs(val.imag) > tol * max(1.0, op_norm(a)):
        raise NotReal(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def eigenspaces(A: HermitianOperator, eig_tol: float | None = None) -> list[tuple[float, np.ndarray]]:
    """Group the spectrum into (value, orthonormal basis columns) clusters.

    Sorted eigenvalues closer than ``eig_tol`` to their neighbour are merged
    (single linkage).  Default tolerance is ``1e-9 * |A|``.
    """
    sp = spectrum(A)
    if eig_tol is None:
        eig_tol = 1e-9 * max(A.norm, np.finfo(float).tiny)
    groups: list[list[int]] = []
    for i, a in enumerate(sp.values):
        if groups and a - sp.values[groups[-1][-1]] <= eig_tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [(float(np.mean(sp.values[g])), sp.vectors[:, g]) for g in groups]


def born_distribution(A: HermitianOperator, v: StateVector, eig_tol: float | None = None) -> OutcomeDistribution:
    """Outcome values, Born probabilities and Lueders-collapsed states."""
    _check_dims(A.dim, v.dim)
    outs = []
    for value, basis in eigenspaces(A, eig_tol):
        proj = basis @ (basis.conj().T @ v.amplitudes)
        p = float(np.vdot(proj, proj).real)
        if p <= UNREACHABLE:
            continue
        outs.append(Outcome(value, p, StateVector.normalized(proj)))
    total = sum(o.probability for o in outs)
    # absorb rounding so probabilities sum to one
    outs = [Outcome(o.value, o.probability / total, o.state) for o in outs]
    return OutcomeDistribution(tuple(outs))


UNREACHABLE = 1e-24  # squared projection norm below which an outcome is dropped


def make_stream(master_seed: int, stream_id: int = 0) -> np.random.Generator:
    """Independent generator for ``stream_id`` derived from ``master_seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(stream_id)]))


def sample_outcome(d: OutcomeDistribution, rng: np.random.Generator) -> tuple[float, StateVector]:
    cum = np.cumsum(d.probabilities)
    k = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
    k = min(k, len(d) - 1)
    o = d.outcomes[k]
    return o.value, o.state


def tensor(A: HermitianOperator, B: HermitianOperator) -> HermitianOperator:
    return HermitianOperator(np.kron(A.matrix, B.matrix))


def equal_up_to_phase(u: StateVector, w: StateVector, tol: float = 1e-12) -> bool:
    _check_dims(u.dim, w.dim)
    # the minimizing phase aligns w with u
    overlap = np.vdot(w.amplitudes, u.amplitudes)
    lam = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return bool(np.linalg.norm(u.amplitudes - lam * w.amplitudes) <= tol)


def haar_state(dim: int, rng: np.random.Generator) -> StateVector:
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector.normalized(z)


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> HermitianOperator:
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(scale * 0.5 * (z + z.conj().T))


def identity(dim: int) -> HermitianOperator:
    return HermitianOperator(np.eye(dim))


PAULI_X = HermitianOperator(np.array([[0, 1], [1, 0]]))
PAULI_Y = HermitianOperator(np.array([[0, -1j], [1j, 0]]))
PAULI_Z = HermitianOperator(np.array([[1, 0], [0, -1]]))


def basis_states(dim: int) -> list[StateVector]:
    return [StateVector.basis(dim, i) for i in range(dim)]


def coverage_states(ops: Sequence[HermitianOperator], dim: int, n_haar: int,
                    rng: np.random.Generator) -> list[StateVector]:
    """States used to stand in for "all initial states".

    Haar samples, the computational basis, and an eigenbasis of every operator.
    """
    states = [haar_state(dim, rng) for _ in range(n_haar)]
    states += basis_states(dim)
    for A in ops:
        states += spectrum(A).states
    return states
