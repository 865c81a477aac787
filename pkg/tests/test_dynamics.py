import numpy as np
import pytest

from avcp.dynamics import (
    EvolutionSpec,
    energy_drift,
    evolve,
    exact_step_expectation,
    heisenberg_step_expectation,
    loglog_slope,
    propagator,
    self_convergence,
    stepped_propagator,
    unitarity_defect,
)
from avcp.opcore import (
    PAULI_X,
    PAULI_Z,
    HermitianOperator,
    StateVector,
    equal_up_to_phase,
    haar_state,
    op_norm,
    random_hermitian,
    spectrum,
)


def test_propagator_examples(rng):
    assert np.allclose(propagator(PAULI_Z, np.pi), -np.eye(2), atol=1e-12)
    H = random_hermitian(4, rng)
    assert np.allclose(propagator(H, 0.0), np.eye(4))
    assert unitarity_defect(propagator(H, 3.7, hbar=0.3)) <= 1e-12


def test_composition_law(rng):
    H = random_hermitian(5, rng)
    for _ in range(20):
        t1, t2 = rng.uniform(-3, 3, size=2)
        lhs = propagator(H, t1 + t2)
        rhs = propagator(H, t2) @ propagator(H, t1)
        assert op_norm(lhs - rhs) <= 1e-12 * 10


def test_eigenvectors_pick_up_phase(rng):
    H = random_hermitian(4, rng)
    sp = spectrum(H)
    U = propagator(H, 0.7, hbar=2.0)
    for E, v in zip(sp.values, sp.vectors.T):
        assert np.allclose(U @ v, np.exp(-1j * E * 0.7 / 2.0) * v, atol=1e-12)


def test_stepped_constant_matches_exact(rng):
    H = random_hermitian(3, rng)
    U = stepped_propagator(EvolutionSpec(H, 0.0, 1.3, 0.1))
    assert op_norm(U - propagator(H, 1.3)) <= 1e-10
    one = stepped_propagator(EvolutionSpec(H, 0.0, 1.3, 1.3))
    assert op_norm(one - propagator(H, 1.3)) <= 1e-12


def test_stepped_first_order_convergence():
    spec = EvolutionSpec(lambda t: HermitianOperator(PAULI_Z.matrix + t * PAULI_X.matrix), 0.0, 1.0, 0.1)
    steps = [0.1, 0.05, 0.025, 0.0125]
    errs, slope = self_convergence(spec, steps)
    assert abs(slope - 1) <= 0.2
    assert unitarity_defect(stepped_propagator(spec)) <= 1e-10


def test_evolution_spec_validation():
    with pytest.raises(ValueError):
        EvolutionSpec(PAULI_Z, 0, 1, 0)
    with pytest.raises(ValueError):
        EvolutionSpec(PAULI_Z, 1, 0, 0.1)


def test_energy_conservation(rng):
    for _ in range(10):
        H = random_hermitian(4, rng)
        for _ in range(10):
            assert energy_drift(H, haar_state(4, rng), 10.0) <= 1e-10 * H.norm
    zero = HermitianOperator(np.zeros((3, 3)))
    assert energy_drift(zero, haar_state(3, rng), 10.0) == 0


def test_stationary_states(rng):
    H = random_hermitian(3, rng)
    for v in spectrum(H).states:
        for t in np.linspace(0, 5, 11):
            assert equal_up_to_phase(evolve(v, propagator(H, t)), v)


def test_heisenberg_step(rng):
    H = random_hermitian(3, rng)
    v = haar_state(3, rng)
    assert heisenberg_step_expectation(H, H, v, 0.3) == pytest.approx(exact_step_expectation(H, H, v, 0.3))
    v = StateVector.normalized([np.cos(0.4), np.sin(0.4) * np.exp(0.9j)])
    dts = [0.1 / 2 ** k for k in range(5)]
    res = [abs(heisenberg_step_expectation(PAULI_X, PAULI_Z, v, dt) - exact_step_expectation(PAULI_X, PAULI_Z, v, dt))
           for dt in dts]
    assert abs(loglog_slope(dts, res) - 2) <= 0.2
