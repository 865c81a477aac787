"""Uniform record for numeric identity checks."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass(frozen=True)
class CheckRecord:
    name: str
    lhs: object
    rhs: object
    abs_err: float
    tol: float
    passed: bool
    notes: str = ""
    group: str = ""

    def as_dict(self) -> dict:
        d = asdict(self)
        d["lhs"] = _jsonable(self.lhs)
        d["rhs"] = _jsonable(self.rhs)
        return d


def _jsonable(x):
    if isinstance(x, np.ndarray):
        x = x.tolist()
    if isinstance(x, complex):
        return [x.real, x.imag] if x.imag else x.real
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def check(name: str, lhs, rhs, tol: float, notes: str = "", group: str = "") -> CheckRecord:
    """Compare ``lhs`` and ``rhs`` (scalars or arrays) in max-abs norm."""
    a = np.asarray(lhs, dtype=complex)
    b = np.asarray(rhs, dtype=complex)
    err = float(np.max(np.abs(a - b), initial=0.0))
    return CheckRecord(name, lhs, rhs, err, tol, bool(err <= tol), notes, group)


def bound(name: str, value: float, limit: float, notes: str = "", group: str = "") -> CheckRecord:
    """``value <= limit``; abs_err holds the value itself."""
    value = float(value)
    return CheckRecord(name, value, limit, value, float(limit), bool(value <= limit), notes, group)


def flag(name: str, ok: bool, notes: str = "", group: str = "", value=None) -> CheckRecord:
    return CheckRecord(name, value, None, 0.0 if ok else 1.0, 0.0, bool(ok), notes, group)


@dataclass
class Suite:
    records: list[CheckRecord] = field(default_factory=list)

    def add(self, rec: CheckRecord) -> CheckRecord:
        self.records.append(rec)
        return rec

    def extend(self, recs) -> None:
        self.records.extend(recs)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)
