"""Experiment configuration: TOML schema, builtin operators, and the check runner."""
from __future__ import annotations

from pathlib import Path
from typing import Any, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from . import lattice as lat
from . import spin
from .arrange import (
    Arrangement,
    Background,
    Infeasible,
    MeasurementDecl,
    assign_copies,
    avcp_check,
    exact_expected_output,
    mc_expected_output,
    solve_representing_operator,
)
from .checks import CheckRecord, check, flag
from .errors import AVCPError, ConfigError
from .opcore import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    HermitianOperator,
    StateVector,
    haar_state,
    hermitian_from_matrix,
    make_stream,
    op_norm,
    random_hermitian,
    spectrum,
)
from .symalg import CommutationSpec, nc_to_matrix, parse_expression

SCHEMA_VERSION = "1.0"

BUILTINS = {
    "pauli_x": "Pauli sigma_x (2x2)",
    "pauli_y": "Pauli sigma_y (2x2)",
    "pauli_z": "Pauli sigma_z (2x2)",
    "spin_j": "angular momentum component; keys N (dimension 2j+1), axis x|y|z; scaled by hbar",
    "lattice_x": "lattice position; keys M, a",
    "lattice_p": "lattice momentum; keys M, a; scaled by hbar",
    "random_hermitian": "seeded random Hermitian; keys dim, stream",
    "identity": "identity; key dim",
}

CHECK_KINDS = {
    "avcp": "compare <candidate> with the arrangement's exact output on a state set; expect pass|fail",
    "solve": "least-squares representing operator; expect operator (optionally equals=EXPR) or infeasible",
    "mc": "Monte Carlo estimate within sigma*stderr of exact; optional exact support",
    "eigenvalues": "eigenvalues of an operator expression against a list",
    "exact": "exact expected output against the expectation of an operator expression",
    "hermitization_inconsistency": "free-algebra grouping defect of the symmetrized product rule",
    "poisson_rule": "bracket/commutator correspondence on random simple pairs; optional defect reference",
    "so3": "SO(3) commutator residual scaling slope",
    "spin_identities": "angular-momentum commutator identities for N in a list",
}


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class OperatorSpec(_Model):
    builtin: Optional[str] = None
    matrix: Optional[list[list[list[float]]]] = None
    N: Optional[int] = Field(default=None, ge=1)
    axis: Optional[Literal["x", "y", "z"]] = None
    M: Optional[int] = Field(default=None, ge=4)
    a: Optional[float] = Field(default=None, gt=0)
    dim: Optional[int] = Field(default=None, ge=1)
    stream: int = 0
    embed: Optional[list[int]] = None  # [subsystem, d0, d1, ...]

    @model_validator(mode="after")
    def _one_source(self):
        if (self.builtin is None) == (self.matrix is None):
            raise ValueError("give exactly one of 'builtin' or 'matrix'")
        if self.builtin is not None and self.builtin not in BUILTINS:
            raise ValueError(f"unknown builtin {self.builtin!r}; known: {', '.join(BUILTINS)}")
        need = {"spin_j": ("N", "axis"), "lattice_x": ("M",), "lattice_p": ("M",),
                "random_hermitian": ("dim",), "identity": ("dim",)}.get(self.builtin or "", ())
        missing = [k for k in need if getattr(self, k) is None]
        if missing:
            raise ValueError(f"builtin {self.builtin!r} needs {missing}")
        if self.matrix is not None:
            n = len(self.matrix)
            if n == 0 or any(len(r) != n for r in self.matrix) or any(len(c) != 2 for r in self.matrix for c in r):
                raise ValueError("matrix must be square with [re, im] entries")
        return self


class MeasurementSpec(_Model):
    label: str
    operator: str
    subsystem: Optional[int] = None


class BackgroundSpec(_Model):
    hamiltonian: str
    t0: float = 0.0
    t1: float = 0.0
    t2: float = 0.0

    @model_validator(mode="after")
    def _order(self):
        if not self.t0 <= self.t1 <= self.t2:
            raise ValueError("times must satisfy t0 <= t1 <= t2")
        return self


class ArrangementSpec(_Model):
    name: str
    measurements: list[MeasurementSpec] = Field(min_length=1)
    combining: str
    copies: Union[Literal["auto"], dict[str, int]] = "auto"
    permit_violations: bool = False
    background: Optional[BackgroundSpec] = None


class StateSpec(_Model):
    haar: int = Field(default=20, ge=0)
    basis: bool = True
    eigen: list[str] = Field(default_factory=list)  # operator names whose eigenbases are included
    amplitudes: Optional[list[list[float]]] = None  # a single explicit state as [re, im] pairs


class CheckSpec(_Model):
    kind: str
    name: Optional[str] = None
    arrangement: Optional[str] = None
    candidate: Optional[str] = None
    operator: Optional[str] = None
    expect: Optional[str] = None
    equals: Optional[str] = None
    values: Optional[list[float]] = None
    support: Optional[list[float]] = None
    sigma: float = 5.0
    runs: Optional[int] = Field(default=None, ge=1)
    tol: Optional[float] = Field(default=None, gt=0)
    states: StateSpec = Field(default_factory=StateSpec)
    cases: int = Field(default=100, ge=1)
    reference: Optional[str] = None
    eps: list[float] = Field(default_factory=lambda: [1e-2, 1e-3, 1e-4])
    N: list[int] = Field(default_factory=lambda: list(range(1, 9)))
    A: Optional[str] = None
    B: Optional[str] = None

    @field_validator("kind")
    @classmethod
    def _known(cls, v):
        if v not in CHECK_KINDS:
            raise ValueError(f"unknown check kind {v!r}; known: {', '.join(CHECK_KINDS)}")
        return v

    @model_validator(mode="after")
    def _fields(self):
        need = {"avcp": ("arrangement", "candidate"), "solve": ("arrangement", "expect"),
                "mc": ("arrangement",), "eigenvalues": ("operator", "values"),
                "exact": ("arrangement", "candidate")}.get(self.kind, ())
        missing = [k for k in need if getattr(self, k) is None]
        if missing:
            raise ValueError(f"check kind {self.kind!r} needs {missing}")
        if self.kind == "avcp" and self.expect not in (None, "pass", "fail"):
            raise ValueError("avcp expect must be 'pass' or 'fail'")
        if self.kind == "solve" and self.expect not in ("operator", "infeasible"):
            raise ValueError("solve expect must be 'operator' or 'infeasible'")
        return self


class ExperimentConfig(_Model):
    schema_version: str = SCHEMA_VERSION
    name: str
    seed: int = Field(default=20240611, ge=0, lt=2 ** 64)
    dimension: Optional[int] = Field(default=None, ge=1)
    hbar: float = Field(default=1.0, gt=0)
    runs: int = Field(default=100_000, ge=1)
    scalars: dict[str, float] = Field(default_factory=dict)
    operators: dict[str, OperatorSpec] = Field(default_factory=dict)
    arrangements: list[ArrangementSpec] = Field(default_factory=list)
    checks: list[CheckSpec] = Field(min_length=1)

    @field_validator("schema_version")
    @classmethod
    def _version(cls, v):
        if v.split(".")[0] != SCHEMA_VERSION.split(".")[0]:
            raise ValueError(f"unsupported schema version {v!r}; this build reads {SCHEMA_VERSION}")
        return v

    @model_validator(mode="after")
    def _refs(self):
        names = [a.name for a in self.arrangements]
        if len(set(names)) != len(names):
            raise ValueError("arrangement names must be unique")
        for a in self.arrangements:
            for m in a.measurements:
                if m.operator not in self.operators:
                    raise ValueError(f"arrangement {a.name!r}: unknown operator {m.operator!r}")
            if a.background and a.background.hamiltonian not in self.operators:
                raise ValueError(f"arrangement {a.name!r}: unknown hamiltonian {a.background.hamiltonian!r}")
        for c in self.checks:
            if c.arrangement is not None and c.arrangement not in names:
                raise ValueError(f"check {c.kind!r}: unknown arrangement {c.arrangement!r}")
        return self


def format_validation_error(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        path = ".".join(str(p) for p in e["loc"]) or "<root>"
        lines.append(f"{path}: {e['msg']}")
    return "\n".join(lines)


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: invalid TOML: {e}") from e
    return parse_config(data)


def parse_config(data: dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(format_validation_error(e)) from e


# ---------------------------------------------------------------------------
# building
# ---------------------------------------------------------------------------

def build_operator(spec: OperatorSpec, hbar: float, seed: int) -> HermitianOperator:
    if spec.matrix is not None:
        m = np.array([[re + 1j * im for re, im in row] for row in spec.matrix])
        op = hermitian_from_matrix(m)
    else:
        b = spec.builtin
        if b == "pauli_x":
            op = PAULI_X
        elif b == "pauli_y":
            op = PAULI_Y
        elif b == "pauli_z":
            op = PAULI_Z
        elif b == "spin_j":
            op = spin.angular_momentum(spec.N, hbar).axis(spec.axis)
        elif b in ("lattice_x", "lattice_p"):
            cfg = lat.LatticeConfig(spec.M, spec.a or 1.0, hbar)
            op = lat.lattice_position(cfg) if b == "lattice_x" else lat.lattice_momentum(cfg)
        elif b == "random_hermitian":
            op = random_hermitian(spec.dim, make_stream(seed, 1000 + spec.stream))
        else:
            op = HermitianOperator(np.eye(spec.dim))
    if spec.embed:
        from .arrange import embed
        op = embed(op, spec.embed[0], spec.embed[1:])
    return op


class Experiment:
    """A validated config with its operators and arrangements built."""

    def __init__(self, cfg: ExperimentConfig, seed: int | None = None, runs: int | None = None,
                 tol: float | None = None):
        self.cfg = cfg
        self.seed = cfg.seed if seed is None else seed
        self.runs = runs or cfg.runs
        self.tol = tol
        self.scalars = {"hbar": cfg.hbar, **cfg.scalars}
        self.ops = {}
        for n, s in cfg.operators.items():
            try:
                self.ops[n] = build_operator(s, cfg.hbar, self.seed)
            except (AVCPError, ValueError) as e:
                raise ConfigError(f"operators.{n}: {e}") from e
        dims = {o.dim for o in self.ops.values()}
        if cfg.dimension is not None and dims and dims != {cfg.dimension}:
            raise ConfigError(f"dimension: operators have dimensions {sorted(dims)}, config says {cfg.dimension}")
        self.algebra = CommutationSpec.build(list(self.ops), scalars=list(cfg.scalars), default="noncommuting")
        self.arrangements = {a.name: self._arrangement(a) for a in cfg.arrangements}

    def _arrangement(self, spec: ArrangementSpec) -> Arrangement:
        labels = [m.label for m in spec.measurements]
        try:
            f = parse_expression(spec.combining, "classical", scalars=list(self.scalars), symbols=labels)
        except AVCPError as e:
            raise ConfigError(f"arrangements.{spec.name}.combining: {e}") from e
        ms = [MeasurementDecl(m.label, self.ops[m.operator], m.subsystem) for m in spec.measurements]
        bg = None
        if spec.background:
            b = spec.background
            bg = Background(self.ops[b.hamiltonian], b.t0, b.t1, b.t2, hbar=self.cfg.hbar)
        kw = dict(background=bg, scalars=self.scalars, permit_violations=spec.permit_violations)
        if spec.copies == "auto":
            return assign_copies(ms, f, **kw)
        return Arrangement(tuple(ms), f, dict(spec.copies), **kw)

    def operator_expr(self, text: str) -> HermitianOperator:
        p = parse_expression(text, "operator", self.algebra)
        m = nc_to_matrix(p, self.ops, self.scalars)
        return hermitian_from_matrix(m, tol=1e-10)

    def states(self, spec: StateSpec, dim: int, stream: int) -> list[StateVector]:
        if spec.amplitudes is not None:
            return [StateVector.normalized([re + 1j * im for re, im in spec.amplitudes])]
        rng = make_stream(self.seed, stream)
        out = [haar_state(dim, rng) for _ in range(spec.haar)]
        if spec.basis:
            out += [StateVector.basis(dim, k) for k in range(dim)]
        for name in spec.eigen:
            if name not in self.ops:
                raise ConfigError(f"states.eigen: unknown operator {name!r}")
            out += spectrum(self.ops[name]).states
        if not out:
            raise ConfigError("state set is empty")
        return out

    # -- checks --------------------------------------------------------------
    def run_checks(self) -> tuple[list[CheckRecord], list[dict]]:
        recs: list[CheckRecord] = []
        mc: list[dict] = []
        for k, c in enumerate(self.cfg.checks):
            label = c.name or f"{c.kind}" + (f":{c.arrangement}" if c.arrangement else "")
            out = getattr(self, f"_check_{c.kind}")(c, k, label, mc)
            recs.extend(out)
        return recs, mc

    def _tol(self, c: CheckSpec, default: float) -> float:
        if self.tol is not None:
            return self.tol
        return c.tol if c.tol is not None else default

    def _check_avcp(self, c, k, label, mc):
        arr = self.arrangements[c.arrangement]
        C = self.operator_expr(c.candidate)
        states = self.states(c.states, arr.dim, 2000 + k)
        tol = self._tol(c, 1e-10)
        rep = avcp_check(arr, C, states, tol)
        want_pass = c.expect != "fail"
        notes = f"{len(states)} states; {int(rep.per_state_pass.sum())} within tolerance"
        if arr.notes:
            notes += "; " + "; ".join(arr.notes)
        ok = rep.passed if want_pass else not rep.passed
        return [CheckRecord(label, rep.max_deviation, tol, rep.max_deviation, tol, ok,
                            notes + ("" if want_pass else "; expected to fail"))]

    def _check_exact(self, c, k, label, mc):
        arr = self.arrangements[c.arrangement]
        C = self.operator_expr(c.candidate)
        states = self.states(c.states, arr.dim, 2000 + k)
        lhs = [exact_expected_output(arr, v) for v in states]
        rhs = [float(np.vdot(v.amplitudes, C.matrix @ v.amplitudes).real) for v in states]
        return [check(label, lhs, rhs, self._tol(c, 1e-10), notes=f"{len(states)} states")]

    def _check_solve(self, c, k, label, mc):
        arr = self.arrangements[c.arrangement]
        out = solve_representing_operator(arr, seed=self.seed)
        tol = self._tol(c, 1e-8)
        if c.expect == "infeasible":
            res = out.residual if isinstance(out, Infeasible) else 0.0
            return [flag(label, isinstance(out, Infeasible), notes=f"residual {res:.3e}", value=res)]
        if isinstance(out, Infeasible):
            return [CheckRecord(label, None, None, out.residual, tol, False, "solver reported infeasible")]
        if c.equals is None:
            return [flag(label, True, notes="representing operator found", value=out.matrix)]
        want = self.operator_expr(c.equals)
        err = op_norm(out.matrix - want.matrix)
        return [CheckRecord(label, out.matrix, want.matrix, err, tol, err <= tol, f"equals {c.equals}")]

    def _check_mc(self, c, k, label, mc):
        arr = self.arrangements[c.arrangement]
        # one input state: the explicit one if given, else a seeded Haar sample
        one = c.states.model_copy(update={"haar": 1, "basis": False, "eigen": []})
        v = self.states(one, arr.dim, 3000 + k)[0]
        runs = c.runs or self.runs
        res = mc_expected_output(arr, v, runs, master_seed=self.seed + k)
        exact = exact_expected_output(arr, v)
        z = abs(res.mean - exact)
        recs = [CheckRecord(label, res.mean, exact, z, c.sigma * res.stderr, z <= c.sigma * res.stderr,
                            f"{runs} runs, stderr {res.stderr:.3e}")]
        sup = res.records.support()
        if c.support is not None:
            recs.append(check(label + " support", sup, sorted(c.support), self._tol(c, 1e-12)))
        mc.append({"check": label, "arrangement": c.arrangement, "runs": runs, "mean": res.mean,
                   "stderr": res.stderr, "exact": exact, "support": sup if len(sup) <= 64 else None})
        return recs

    def _check_eigenvalues(self, c, k, label, mc):
        ev = spectrum(self.operator_expr(c.operator)).values
        want = sorted(c.values)
        if len(ev) != len(want):
            return [CheckRecord(label, ev, want, float("inf"), self._tol(c, 1e-12), False, "count mismatch")]
        return [check(label, ev, want, self._tol(c, 1e-12), notes=f"operator {c.operator}")]

    def _check_hermitization_inconsistency(self, c, k, label, mc):
        from .suites import hermitization_inconsistency
        A = self.ops[c.A] if c.A else PAULI_X
        B = self.ops[c.B] if c.B else PAULI_Y
        return hermitization_inconsistency(A, B)

    def _check_poisson_rule(self, c, k, label, mc):
        from .suites import poisson_defect, poisson_rule
        return poisson_rule(c.cases, self.seed) + poisson_defect(c.reference)[1]

    def _check_so3(self, c, k, label, mc):
        from .suites import so3_scaling
        return so3_scaling(tuple(c.eps))

    def _check_spin_identities(self, c, k, label, mc):
        from .suites import spin_identities
        return spin_identities(c.N, self._tol(c, 1e-11))


def builtins_catalog() -> str:
    lines = [f"avcp config schema version {SCHEMA_VERSION}", "", "builtin operators:"]
    lines += [f"  {k:<18} {v}" for k, v in BUILTINS.items()]
    lines += ["", "check kinds:"]
    lines += [f"  {k:<28} {v}" for k, v in CHECK_KINDS.items()]
    return "\n".join(lines)


def config_echo(cfg: ExperimentConfig) -> dict[str, Any]:
    return cfg.model_dump(mode="json", exclude_none=True)
