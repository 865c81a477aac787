"""Quantum models of classical measurement arrangements.

An arrangement performs elementary measurements on one or more identically
prepared copies of a system and combines the recorded values with a
polynomial.  Measurements sharing a copy run sequentially in declaration
order with Lueders collapse; distinct copies are statistically independent.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .dynamics import EvolutionSpec, propagator, stepped_propagator
from .errors import AVCPViolation, DimensionMismatch, IllConditioned, NotReal, UnknownLabel
from .opcore import (
    HermitianOperator,
    StateVector,
    born_distribution,
    commutator,
    expectation,
    haar_state,
    make_stream,
    op_norm,
)
from .symalg.polys import HBAR, ClassicalPoly, coef_complex

COMMUTE_TOL = 1e-10


def embed(op: HermitianOperator, subsystem: int, dims: Sequence[int]) -> HermitianOperator:
    """``I x .. x op x .. x I`` with ``op`` on factor ``subsystem`` of ``dims``."""
    if op.dim != dims[subsystem]:
        raise DimensionMismatch(f"operator dimension {op.dim} != subsystem dimension {dims[subsystem]}")
    m = np.eye(1, dtype=complex)
    for k, d in enumerate(dims):
        m = np.kron(m, op.matrix if k == subsystem else np.eye(d))
    return HermitianOperator(m)


def is_product_state(v: StateVector, dims: Sequence[int], tol: float = 1e-10) -> bool:
    """True when ``v`` factorizes across a two-factor split ``dims``."""
    if len(dims) != 2:
        raise ValueError("product test supports two factors")
    sv = np.linalg.svd(v.amplitudes.reshape(dims), compute_uv=False)
    return bool(np.all(sv[1:] <= tol))


ENTANGLED_NOTE = ("input is entangled across subsystems; same-copy and split-copy "
                  "arrangements of a product observable can differ")


def commutes(A: HermitianOperator, B: HermitianOperator, tol: float = COMMUTE_TOL) -> bool:
    scale = max(A.norm * B.norm, np.finfo(float).tiny)
    return op_norm(commutator(A, B)) <= tol * scale


@dataclass(frozen=True)
class MeasurementDecl:
    label: str
    operator: HermitianOperator
    subsystem: int | None = None
    time: str = "t1"


@dataclass(frozen=True)
class Background:
    """Evolution between preparation (t0), measurements (t1) and target (t2)."""

    hamiltonian: HermitianOperator | Callable[[float], HermitianOperator]
    t0: float = 0.0
    t1: float = 0.0
    t2: float = 0.0
    hbar: float = 1.0
    step: float | None = None  # required for time-dependent Hamiltonians

    def propagator(self, t_from: float, t_to: float) -> np.ndarray:
        h = self.hamiltonian
        if isinstance(h, HermitianOperator):
            return propagator(h, t_to - t_from, self.hbar)
        if self.step is None:
            raise ValueError("time-dependent background needs a step")
        if t_to == t_from:
            return np.eye(h(t_from).dim, dtype=complex)
        return stepped_propagator(EvolutionSpec(h, t_from, t_to, self.step, self.hbar))

    def evolve(self, v: StateVector, t_from: float, t_to: float) -> StateVector:
        return StateVector.normalized(self.propagator(t_from, t_to) @ v.amplitudes)


@dataclass(frozen=True)
class Arrangement:
    measurements: tuple[MeasurementDecl, ...]
    combining: ClassicalPoly
    copy_assignment: Mapping[str, int]
    target: MeasurementDecl | None = None
    background: Background | None = None
    scalars: Mapping[str, float] = field(default_factory=lambda: {HBAR: 1.0})
    commute_tol: float = COMMUTE_TOL
    notes: tuple[str, ...] = ()
    # simulate noncommuting same-copy sequences instead of rejecting them
    permit_violations: bool = False

    def __post_init__(self):
        ms = tuple(self.measurements)
        object.__setattr__(self, "measurements", ms)
        if not ms:
            raise ValueError("arrangement needs at least one measurement")
        labels = [m.label for m in ms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate measurement labels in {labels}")
        dims = {m.operator.dim for m in ms}
        if self.target is not None:
            dims.add(self.target.operator.dim)
            if self.target.label in labels:
                raise ValueError("target label must differ from measurement labels")
        if len(dims) != 1:
            raise DimensionMismatch(f"measurement operators have dimensions {sorted(dims)}")
        missing = self.combining.symbols() - set(labels)
        if missing:
            raise UnknownLabel(f"combining function uses undeclared labels {sorted(missing)}")
        copies = dict(self.copy_assignment)
        unassigned = set(labels) - set(copies)
        if unassigned:
            raise UnknownLabel(f"no copy assigned to {sorted(unassigned)}")
        extra = set(copies) - set(labels)
        if extra:
            raise UnknownLabel(f"copy assignment names unknown labels {sorted(extra)}")
        object.__setattr__(self, "copy_assignment", copies)
        scal = {HBAR: 1.0, **dict(self.scalars)}
        object.__setattr__(self, "scalars", scal)

        notes = list(self.notes)
        by_label = {m.label: m for m in ms}
        for i, a in enumerate(labels):
            for b in labels[i + 1:]:
                ma, mb = by_label[a], by_label[b]
                same = copies[a] == copies[b]
                comm = commutes(ma.operator, mb.operator, self.commute_tol)
                if same and not comm:
                    msg = (f"noncommuting measurements {a!r} and {b!r} share copy {copies[a]}; "
                           "they must be performed on different copies")
                    if not self.permit_violations:
                        raise AVCPViolation(msg)
                    notes.append(msg + " (simulated in declaration order)")
                same_sub = ma.subsystem == mb.subsystem
                if comm and not same and same_sub:
                    notes.append(
                        f"commuting measurements {a!r} and {b!r} are on different copies; "
                        "the correspondence rule expects them on the same copy")
        object.__setattr__(self, "notes", tuple(dict.fromkeys(notes)))

    @property
    def labels(self) -> list[str]:
        return [m.label for m in self.measurements]

    @property
    def dim(self) -> int:
        return self.measurements[0].operator.dim

    @property
    def n_copies(self) -> int:
        return len(set(self.copy_assignment.values()))

    def copies(self) -> list[list[MeasurementDecl]]:
        """Measurements grouped by copy, copies in first-appearance order."""
        order: dict[int, list[MeasurementDecl]] = {}
        for m in self.measurements:
            order.setdefault(self.copy_assignment[m.label], []).append(m)
        return list(order.values())

    def follows_rules(self) -> bool:
        return not self.notes

    def state_at_measurement(self, v0: StateVector) -> StateVector:
        if self.background is None:
            return v0
        b = self.background
        return b.evolve(v0, b.t0, b.t1)

    def state_at_target(self, v0: StateVector) -> StateVector:
        if self.background is None:
            return v0
        b = self.background
        return b.evolve(v0, b.t0, b.t2)


def assign_copies(measurements: Sequence[MeasurementDecl], combining: ClassicalPoly | None = None,
                  commute_tol: float = COMMUTE_TOL, **kwargs) -> Arrangement:
    """Greedy colouring of the noncommutation graph in declaration order.

    Each measurement joins the first copy whose members all commute with it.
    """
    groups: list[list[MeasurementDecl]] = []
    assignment = {}
    for m in measurements:
        for k, g in enumerate(groups):
            if all(commutes(m.operator, o.operator, commute_tol) for o in g):
                g.append(m)
                assignment[m.label] = k
                break
        else:
            groups.append([m])
            assignment[m.label] = len(groups) - 1
    if combining is None:
        combining = ClassicalPoly()
        for m in measurements:
            combining = combining + ClassicalPoly.symbol(m.label)
    return Arrangement(tuple(measurements), combining, assignment, commute_tol=commute_tol, **kwargs)


# ---------------------------------------------------------------------------
# exact expected output
# ---------------------------------------------------------------------------

def _copy_paths(ops: list[MeasurementDecl], v: StateVector) -> list[tuple[dict, float]]:
    """Every outcome path of a sequential run on one copy with its probability."""
    paths = [({}, 1.0, v)]
    for m in ops:
        nxt = []
        for vals, prob, state in paths:
            for o in born_distribution(m.operator, state):
                nxt.append(({**vals, m.label: o.value}, prob * o.probability, o.state))
        paths = nxt
    return [(vals, prob) for vals, prob, _ in paths]


def _as_real(x: complex, scale: float) -> float:
    x = complex(x)
    if abs(x.imag) > 1e-10 * max(1.0, scale):
        raise NotReal(f"expected output has imaginary part {x.imag:.3e}")
    return x.real


def exact_expected_output(arr: Arrangement, v0: StateVector) -> float:
    """Exact average of the combining function over all joint outcomes.

    Copies are independent, so each monomial's expectation factorizes into a
    product of per-copy moments.
    """
    if v0.dim != arr.dim:
        raise DimensionMismatch(f"state dimension {v0.dim} != arrangement dimension {arr.dim}")
    v = arr.state_at_measurement(v0)
    per_copy = []
    where = {}
    for k, ops in enumerate(arr.copies()):
        per_copy.append(_copy_paths(ops, v))
        for m in ops:
            where[m.label] = k
    total = 0j
    scale = 0.0
    for (s, body), c in arr.combining.items():
        t = coef_complex(c) * arr.combining.scalar_value(arr.scalars, s)
        split: dict[int, list] = {}
        for name, e in body:
            split.setdefault(where[name], []).append((name, e))
        for k, factors in split.items():
            moment = 0.0
            for vals, prob in per_copy[k]:
                term = prob
                for name, e in factors:
                    term *= vals[name] ** e
                moment += term
            t *= moment
        total += t
        scale = max(scale, abs(t))
    return _as_real(total, scale)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

@dataclass
class _Node:
    values: np.ndarray
    cum: np.ndarray
    children: list[int]


def _build_tree(ops: list[MeasurementDecl], v: StateVector) -> list[list[_Node]]:
    """Outcome tree per depth; node ``children[k]`` indexes the next level."""
    levels: list[list[_Node]] = []
    frontier = [v]
    for depth, m in enumerate(ops):
        nodes = []
        nxt_states = []
        for state in frontier:
            d = born_distribution(m.operator, state)
            kids = []
            for o in d:
                kids.append(len(nxt_states))
                nxt_states.append(o.state)
            nodes.append(_Node(d.values, np.cumsum(d.probabilities), kids))
        levels.append(nodes)
        frontier = nxt_states
    return levels


@dataclass(frozen=True)
class RunRecords:
    """Per-run sampled values and outputs; block ``b`` used stream (seed, b)."""

    values: Mapping[str, np.ndarray]
    outputs: np.ndarray
    master_seed: int
    block_size: int

    def support(self, decimals: int = 12) -> list[float]:
        return sorted({float(x) + 0.0 for x in np.round(self.outputs, decimals)})

    def __len__(self):
        return len(self.outputs)


@dataclass(frozen=True)
class MCResult:
    mean: float
    stderr: float
    records: RunRecords


MC_BLOCK = 1 << 16


def mc_expected_output(arr: Arrangement, v0: StateVector, runs: int, master_seed: int,
                       block_size: int = MC_BLOCK) -> MCResult:
    """Sampled estimate of the expected output.

    Runs are processed in blocks; block ``b`` draws from ``make_stream(master_seed, b)``,
    so results depend only on (seed, runs, block_size).
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    v = arr.state_at_measurement(v0)
    copies = arr.copies()
    trees = [_build_tree(ops, v) for ops in copies]
    values = {label: np.empty(runs) for label in arr.labels}
    for b, start in enumerate(range(0, runs, block_size)):
        n = min(block_size, runs - start)
        rng = make_stream(master_seed, b)
        for ops, levels in zip(copies, trees):
            node = np.zeros(n, dtype=np.int64)
            for m, nodes in zip(ops, levels):
                u = rng.random(n)
                out = np.empty(n)
                nxt = np.empty(n, dtype=np.int64)
                for nid in np.unique(node):
                    sel = node == nid
                    nd = nodes[nid]
                    k = np.searchsorted(nd.cum, u[sel] * nd.cum[-1], side="right")
                    k = np.minimum(k, len(nd.values) - 1)
                    out[sel] = nd.values[k]
                    nxt[sel] = np.asarray(nd.children)[k]
                values[m.label][start:start + n] = out
                node = nxt
    outputs = np.asarray(arr.combining.evaluate(values, arr.scalars))
    if np.iscomplexobj(outputs):
        if np.max(np.abs(outputs.imag), initial=0.0) > 1e-10 * max(1.0, np.max(np.abs(outputs.real), initial=0.0)):
            raise NotReal("combining function produced complex outputs")
        outputs = outputs.real
    outputs = np.broadcast_to(outputs, (runs,)).astype(float)
    mean = float(np.mean(outputs))
    stderr = float(np.std(outputs, ddof=1) / np.sqrt(runs)) if runs > 1 else 0.0
    return MCResult(mean, stderr, RunRecords(values, outputs, int(master_seed), block_size))


# ---------------------------------------------------------------------------
# average-value condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AVCPReport:
    deviations: np.ndarray
    tol: float

    @property
    def max_deviation(self) -> float:
        return float(np.max(self.deviations, initial=0.0))

    @property
    def per_state_pass(self) -> np.ndarray:
        return self.deviations <= self.tol

    @property
    def passed(self) -> bool:
        return bool(np.all(self.per_state_pass))


def avcp_check(arr: Arrangement, candidate: HermitianOperator, states: Sequence[StateVector],
               tol: float = 1e-10) -> AVCPReport:
    """Compare <C> at the target time with the arrangement's expected output."""
    if not states:
        raise ValueError("need at least one state")
    devs = []
    for v0 in states:
        lhs = expectation(candidate, arr.state_at_target(v0))
        rhs = exact_expected_output(arr, v0)
        devs.append(abs(lhs - rhs))
    return AVCPReport(np.array(devs), tol)


@dataclass(frozen=True)
class Infeasible:
    residual: float
    best_fit: HermitianOperator | None = None

    def __bool__(self):
        return False


def hermitian_basis(dim: int) -> list[np.ndarray]:
    """Real basis of Hermitian matrices: e_kk, e_kl + e_lk, i(e_kl - e_lk)."""
    out = []
    for k in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[k, k] = 1
        out.append(e)
    for k in range(dim):
        for l in range(k + 1, dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[k, l] = e[l, k] = 1
            out.append(e)
            e = np.zeros((dim, dim), dtype=complex)
            e[k, l] = 1j
            e[l, k] = -1j
            out.append(e)
    return out


def solve_representing_operator(arr: Arrangement, dim: int | None = None, n_states: int | None = None,
                                residual_tol: float = 1e-8, seed: int = 0,
                                rank_tol: float = 1e-10) -> HermitianOperator | Infeasible:
    """Least-squares Hermitian C with <C>_{t2} = expected output on Haar states.

    Fits on ``n_states`` (default 3 dim^2) states from stream (seed, 0) and
    validates on dim^2 fresh states from stream (seed, 1).
    """
    dim = dim or arr.dim
    if dim != arr.dim:
        raise DimensionMismatch(f"dim {dim} != arrangement dimension {arr.dim}")
    n_basis = dim * dim
    n_states = n_states or 3 * n_basis
    if n_states < n_basis:
        raise ValueError(f"need at least dim^2 = {n_basis} states, got {n_states}")
    basis = hermitian_basis(dim)

    def rows(states):
        X = np.empty((len(states), n_basis))
        y = np.empty(len(states))
        for r, v0 in enumerate(states):
            w = arr.state_at_target(v0).amplitudes
            X[r] = [np.vdot(w, E @ w).real for E in basis]
            y[r] = exact_expected_output(arr, v0)
        return X, y

    rng_fit, rng_val = make_stream(seed, 0), make_stream(seed, 1)
    X, y = rows([haar_state(dim, rng_fit) for _ in range(n_states)])
    sv = np.linalg.svd(X, compute_uv=False)
    if sv[-1] <= rank_tol * sv[0]:
        raise IllConditioned(f"design matrix rank-deficient (sigma_min/sigma_max = {sv[-1] / sv[0]:.2e})")
    coeffs, *_ = np.linalg.lstsq(X, y, rcond=None)
    C = HermitianOperator(sum(c * E for c, E in zip(coeffs, basis)))
    Xv, yv = rows([haar_state(dim, rng_val) for _ in range(n_basis)])
    scale = max(1.0, float(np.max(np.abs(np.concatenate([y, yv])))))
    residual = float(max(np.max(np.abs(X @ coeffs - y)), np.max(np.abs(Xv @ coeffs - yv))))
    if residual <= residual_tol * scale:
        return C
    return Infeasible(residual, C)
