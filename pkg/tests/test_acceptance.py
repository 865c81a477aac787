"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or
``python tests/test_acceptance.py`` for a plain listing.
"""
import json
import time

import numpy as np
import pytest

from avcp import lattice as lat
from avcp import spin
from avcp.checks import CheckRecord, bound, check
from avcp.opcore import haar_state, make_stream
from avcp.suites import (
    DEFAULT_SEED,
    hermitization_inconsistency,
    larmor_check,
    operator_rule_theorem,
    poisson_defect,
    poisson_rule,
    so3_scaling,
    solver_checks,
    spin_half_numbers,
    spin_identities,
    square_check,
    suite_dynamics,
    symmetrized_product_check,
    verify_suite,
)

SEED = DEFAULT_SEED


def report(n: int, title: str, recs: list[CheckRecord], extra: str = "") -> bool:
    ok = all(r.passed for r in recs)
    bad = [r.name for r in recs if not r.passed]
    tail = f" failing: {bad}" if bad else ""
    print(f"\nCRITERION {n:2d} {'PASS' if ok else 'FAIL'}  {title}{(' | ' + extra) if extra else ''}{tail}")
    return ok


def criterion_1():
    t0 = time.perf_counter()
    recs = square_check(SEED, n_states=100, mc_runs=10 ** 6, dims=(2, 3, 4, 5))
    dt = time.perf_counter() - t0
    recs.append(bound("runtime seconds", dt, 30.0))
    return recs, f"{dt:.1f} s"


def criterion_2():
    return solver_checks(SEED), ""


def criterion_3():
    return symmetrized_product_check(SEED), ""


def criterion_4():
    return spin_half_numbers(SEED, runs=100_000), ""


def criterion_5():
    return operator_rule_theorem(SEED, cases=200), ""


def criterion_6():
    return hermitization_inconsistency(), ""


def criterion_7():
    recs = poisson_rule(100, SEED)
    defect, drecs = poisson_defect("2*gamma*hbar^3")
    ref = [r for r in drecs if r.name.startswith("bracket defect vs reference")]
    return recs + drecs, f"defect = {defect}; {ref[0].notes if ref else ''}"


def criterion_8():
    recs = spin_identities(range(1, 9), tol=1e-11)
    recs += so3_scaling()
    rng = make_stream(SEED, 1100)
    worst = 0.0
    for N in range(1, 9):
        t = spin.angular_momentum(N)
        for _ in range(20):
            v = haar_state(N, rng)
            for th in (0.3, 1.7, np.pi):
                worst = max(worst, spin.proj_rotation_check(v, th, t))
    recs.append(bound("proj rotates under R_z conjugation, N=1..8", worst, 1e-11))
    recs += larmor_check()
    return recs, ""


def criterion_9():
    cfg = lat.LatticeConfig(M=256)
    rng = make_stream(SEED, 1200)
    worst = max(lat.shift_compare(haar_state(cfg.M, rng), s, cfg) for s in (1, -1, 5))
    recs = [bound("integer-site shift identity", worst, 1e-12)]
    g = lat.gaussian_packet(cfg, -cfg.a / 2, 8.0, 0.4)
    dx = dp = 0.0
    for s in (1, 3, 10):
        w = lat.translate(g, s * cfg.a, cfg)
        dx = max(dx, abs(lat.mean_position(w, cfg) - lat.mean_position(g, cfg) - s * cfg.a))
        dp = max(dp, abs(lat.mean_momentum(w, cfg) - lat.mean_momentum(g, cfg)))
    recs.append(bound("<x> shift under displacement", dx, 1e-9))
    recs.append(bound("<p> invariance under displacement", dp, 1e-9))
    d = max(lat.canonical_defect(lat.gaussian_packet(cfg, c, 8.0, k0), cfg)
            for c in (0.0, -0.5) for k0 in (0.0, 0.5))
    recs.append(bound("canonical defect, width-8 centered Gaussians", d, 1e-6 * cfg.hbar))
    c = 2.0
    rate = lat.ehrenfest_rate(lat.gaussian_packet(cfg, 0.0, 8.0, 0.3), c, 0.5, cfg)
    recs.append(check("Ehrenfest rate for H = cP", rate, c, 1e-6 * c))
    return recs, ""


def criterion_10():
    return suite_dynamics(SEED), ""


def _stable(recs):
    return json.dumps([r.as_dict() for r in recs], sort_keys=True, default=str)


def criterion_11():
    t0 = time.perf_counter()
    first = verify_suite(SEED)
    dt = time.perf_counter() - t0
    second = verify_suite(SEED)
    recs = [r for r in first if not r.passed]
    recs.append(bound("verify_suite runtime seconds", dt, 300.0))
    recs.append(CheckRecord("reruns bit-identical", None, None, 0.0, 0.0, _stable(first) == _stable(second)))
    return recs, f"{len(first)} checks in {dt:.1f} s"


CRITERIA = {
    1: ("three a^2 arrangements: exact and Monte Carlo", criterion_1),
    2: ("representing-operator solver", criterion_2),
    3: ("symmetrized product on eigenstates vs Haar states", criterion_3),
    4: ("spin-1/2 sequential support and S_x+S_z eigenvalues", criterion_4),
    5: ("operator-rule theorem over 200 random cases", criterion_5),
    6: ("hermitization inconsistency", criterion_6),
    7: ("Poisson-bracket rule and its scalar defect", criterion_7),
    8: ("spin identities, SO(3) scaling, proj rotation, Larmor closure", criterion_8),
    9: ("lattice shifts, canonical defect, Ehrenfest rate", criterion_9),
    10: ("dynamics: composition, energy drift, stepped convergence", criterion_10),
    11: ("end-to-end verify_suite runtime and determinism", criterion_11),
}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    title, fn = CRITERIA[n]
    recs, extra = fn()
    assert report(n, title, recs, extra), [r for r in recs if not r.passed]


if __name__ == "__main__":
    for n, (title, fn) in CRITERIA.items():
        recs, extra = fn()
        report(n, title, recs, extra)
