"""Angular momentum for a spin of any finite dimension.

Rotation convention (active, right-handed): the unitary exp(-i theta L_a / hbar)
rotates the expectation vector <L> by +theta about axis a.  For a = z the
3x3 matrix is [[c, -s, 0], [s, c, 0], [0, 0, 1]].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .checks import CheckRecord, bound, check
from .dynamics import loglog_slope, propagator
from .errors import DimensionMismatch
from .opcore import HermitianOperator, StateVector, commutator, expectation, identity, op_norm

AXES = ("x", "y", "z")
ROTATION_CONVENTION = "active: exp(-i theta L_a/hbar) rotates <L> by +theta about a (right-hand rule)"


@dataclass(frozen=True)
class AngularMomentumTriple:
    Lx: HermitianOperator
    Ly: HermitianOperator
    Lz: HermitianOperator
    hbar: float = 1.0

    @property
    def dim(self) -> int:
        return self.Lz.dim

    @property
    def j(self) -> float:
        return (self.dim - 1) / 2

    def axis(self, a: str) -> HermitianOperator:
        try:
            return {"x": self.Lx, "y": self.Ly, "z": self.Lz}[a]
        except KeyError:
            raise ValueError(f"axis must be one of x, y, z; got {a!r}") from None

    def __iter__(self):
        return iter((self.Lx, self.Ly, self.Lz))

    def casimir(self) -> np.ndarray:
        return sum(L.matrix @ L.matrix for L in self)


def angular_momentum(N: int, hbar: float = 1.0) -> AngularMomentumTriple:
    """Ladder construction in the basis m = j, j-1, ..., -j."""
    if N < 1:
        raise ValueError("N must be >= 1")
    j = (N - 1) / 2
    m = j - np.arange(N)
    Lz = hbar * np.diag(m).astype(complex)
    Lp = np.zeros((N, N), dtype=complex)
    for k in range(1, N):
        # L+ |m> = hbar sqrt(j(j+1) - m(m+1)) |m+1>, with |m+1> one index up
        mm = m[k]
        Lp[k - 1, k] = hbar * np.sqrt(j * (j + 1) - mm * (mm + 1))
    Lm = Lp.conj().T
    Lx = (Lp + Lm) / 2
    Ly = (Lp - Lm) / 2j
    return AngularMomentumTriple(HermitianOperator(Lx), HermitianOperator(Ly), HermitianOperator(Lz), hbar)


def rotation_generator(axis: str, triple: AngularMomentumTriple) -> HermitianOperator:
    return triple.axis(axis).scale(1.0 / triple.hbar)


def rotation_unitary(axis: str, theta: float, triple: AngularMomentumTriple) -> np.ndarray:
    return propagator(rotation_generator(axis, triple), theta)


def rotation_matrix(axis: str, theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    if axis == "x":
        return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    if axis == "y":
        return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])
    if axis == "z":
        return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    raise ValueError(f"axis must be one of x, y, z; got {axis!r}")


def proj(v: StateVector, triple: AngularMomentumTriple) -> np.ndarray:
    if v.dim != triple.dim:
        raise DimensionMismatch(f"state dimension {v.dim} != spin dimension {triple.dim}")
    return np.array([expectation(L, v) for L in triple])


def so3_commutator_residual(eps: float) -> float:
    if eps < 0:
        raise ValueError("eps must be >= 0")
    Rx, Ry = rotation_matrix("x", eps), rotation_matrix("y", eps)
    lhs = Rx @ Ry - Ry @ Rx
    rhs = rotation_matrix("z", eps * eps) - np.eye(3)
    return float(np.linalg.norm(lhs - rhs, 2))


def proj_rotation_check(v: StateVector, theta: float, triple: AngularMomentumTriple, axis: str = "z") -> float:
    """|proj(exp(-i theta R_a) v) - R_a(theta) proj(v)|."""
    w = StateVector.normalized(rotation_unitary(axis, theta, triple) @ v.amplitudes)
    return float(np.linalg.norm(proj(w, triple) - rotation_matrix(axis, theta) @ proj(v, triple)))


def precession_hamiltonian(B: Sequence[float], q: float, m: float, triple: AngularMomentumTriple) -> HermitianOperator:
    H = sum(b * L.matrix for b, L in zip(B, triple))
    return HermitianOperator(-(q / (2 * m)) * np.asarray(H, dtype=complex))


def precess(v0: StateVector, B: Sequence[float], q: float, m: float, t_grid: Sequence[float],
            triple: AngularMomentumTriple) -> list[np.ndarray]:
    H = precession_hamiltonian(B, q, m, triple)
    out = []
    for t in t_grid:
        w = StateVector.normalized(propagator(H, t, triple.hbar) @ v0.amplitudes)
        out.append(proj(w, triple))
    return out


def first_order_unitaries_residual(triple: AngularMomentumTriple, eps: float, v: StateVector) -> float:
    """|proj(U1U2v) - proj(U2U1v) - proj(U3(eps^2)v) + proj(v)| with exact U_a(eps)."""
    U = {a: rotation_unitary(a, eps, triple) for a in AXES}
    U3 = rotation_unitary("z", eps * eps, triple)

    def p(M):
        return proj(StateVector.normalized(M @ v.amplitudes), triple)

    lhs = p(U["x"] @ U["y"]) - p(U["y"] @ U["x"])
    rhs = p(U3) - proj(v, triple)
    return float(np.linalg.norm(lhs - rhs))


_EPS3 = {("x", "y"): ("z", 1), ("y", "z"): ("x", 1), ("z", "x"): ("y", 1),
         ("y", "x"): ("z", -1), ("z", "y"): ("x", -1), ("x", "z"): ("y", -1)}


def bracket_defect_check(triple: AngularMomentumTriple, tol: float | None = None,
                         q: float = 1.0, B: float = 1.0, m: float = 1.0, dt: float = 1e-3) -> list[CheckRecord]:
    """Numeric residuals of the spin commutator identities for ``triple``."""
    hb = triple.hbar
    N = triple.dim
    scale = max(1.0, hb * hb * max(triple.j, 0.5) ** 2)
    tol = tol if tol is not None else 1e-12 * scale * max(1, N)
    L = {a: triple.axis(a) for a in AXES}
    R = {a: rotation_generator(a, triple) for a in AXES}
    recs: list[CheckRecord] = []
    K = L["z"].matrix + (1j / hb) * commutator(L["x"], L["y"])
    for a in AXES:
        recs.append(check(f"[L{a}, Lz + (i/hbar)[Lx,Ly]] = 0", commutator(L[a].matrix, K), 0, tol))
    # gamma constants: [La, Lb] - i hbar Lc = i gamma 1
    for a, b in (("x", "y"), ("y", "z"), ("z", "x")):
        c, _ = _EPS3[(a, b)]
        d = commutator(L[a], L[b]) - 1j * hb * L[c].matrix
        gamma = (np.trace(d) / (1j * N)).real if N else 0.0
        recs.append(check(f"gamma for [L{a},L{b}]", gamma, 0.0, tol))
        recs.append(check(f"[L{a},L{b}] = i hbar L{c}", commutator(L[a], L[b]), 1j * hb * L[c].matrix, tol))
    for a in AXES:
        for b in AXES:
            want = np.zeros((N, N), dtype=complex)
            if a != b:
                c, sgn = _EPS3[(a, b)]
                want = sgn * 1j * L[c].matrix
            recs.append(check(f"[R{a},L{b}]", commutator(R[a], L[b]), want, tol))
        recs.append(check(f"hbar R{a} - L{a} = gamma 1", hb * R[a].matrix - L[a].matrix, 0, tol))
    j = triple.j
    recs.append(check("L^2 = hbar^2 j(j+1) 1", triple.casimir(), hb * hb * j * (j + 1) * np.eye(N),
                      max(tol, 1e-10 * scale)))
    eps = abs(q) * B * dt / (2 * m)
    for a in AXES:
        Ra = R[a]
        exact = propagator(Ra, eps)
        first = identity(N).matrix - 1j * eps * Ra.matrix
        err = op_norm(exact - first)
        recs.append(bound(f"first-order U{a} remainder", err, eps * eps * Ra.norm ** 2 / 2 * (1 + 1e-9) + 1e-15,
                          notes=f"eps = |q|B dt/2m = {eps:g}"))
    return recs


def triple_invariants(triple: AngularMomentumTriple) -> list[CheckRecord]:
    hb, j, N = triple.hbar, triple.j, triple.dim
    tol = 1e-12 * hb * hb * max(j * j, 1.0)
    recs = [
        check("[Lx,Ly] = i hbar Lz", commutator(triple.Lx, triple.Ly), 1j * hb * triple.Lz.matrix, tol),
        check("[Ly,Lz] = i hbar Lx", commutator(triple.Ly, triple.Lz), 1j * hb * triple.Lx.matrix, tol),
        check("[Lz,Lx] = i hbar Ly", commutator(triple.Lz, triple.Lx), 1j * hb * triple.Ly.matrix, tol),
        check("Casimir", triple.casimir(), hb * hb * j * (j + 1) * np.eye(N), 1e-10 * max(1.0, hb * hb)),
    ]
    return recs


def conjugation_residual(triple: AngularMomentumTriple, theta: float) -> float:
    """|exp(i theta Rz) Lx exp(-i theta Rz) - (cos Lx - sin Ly)|."""
    U = rotation_unitary("z", theta, triple)
    lhs = U.conj().T @ triple.Lx.matrix @ U
    rhs = np.cos(theta) * triple.Lx.matrix - np.sin(theta) * triple.Ly.matrix
    return op_norm(lhs - rhs)


def first_order_slope(triple: AngularMomentumTriple, v: StateVector,
                      eps_values: Sequence[float] = (1e-2, 1e-3, 1e-4)) -> tuple[list[float], float]:
    res = [first_order_unitaries_residual(triple, e, v) for e in eps_values]
    return res, loglog_slope(eps_values, res)

