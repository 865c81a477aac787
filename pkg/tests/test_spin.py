import numpy as np
import pytest

from avcp.errors import DimensionMismatch
from avcp.opcore import PAULI_X, PAULI_Y, PAULI_Z, StateVector, commutator, haar_state, make_stream, op_norm, spectrum
from avcp.spin import (
    angular_momentum,
    bracket_defect_check,
    conjugation_residual,
    first_order_slope,
    precess,
    proj,
    proj_rotation_check,
    rotation_generator,
    rotation_matrix,
    so3_commutator_residual,
    triple_invariants,
)

UP = StateVector.basis(2, 0)
PLUS = StateVector(np.array([1, 1]) / np.sqrt(2))


def test_spin_half_is_pauli():
    t = angular_momentum(2, hbar=0.7)
    for L, s in zip(t, (PAULI_X, PAULI_Y, PAULI_Z)):
        assert np.allclose(L.matrix, 0.35 * s.matrix)


def test_spin_one_and_zero():
    assert np.allclose(spectrum(angular_momentum(3).Lz).values, [-1, 0, 1])
    t = angular_momentum(1)
    assert all(np.all(L.matrix == 0) for L in t)
    with pytest.raises(ValueError):
        angular_momentum(0)


@pytest.mark.parametrize("N", range(1, 9))
def test_triple_invariants(N):
    assert all(r.passed for r in triple_invariants(angular_momentum(N, hbar=1.7)))


def test_rotation_generator():
    t = angular_momentum(2)
    assert np.allclose(rotation_generator("z", t).matrix, PAULI_Z.matrix / 2)
    Rz = rotation_generator("z", angular_momentum(4))
    t4 = angular_momentum(4)
    assert op_norm(commutator(Rz, t4.Lz)) <= 1e-12
    assert op_norm(commutator(Rz, t4.Lx) - 1j * t4.Ly.matrix) <= 1e-12
    assert op_norm(commutator(Rz, t4.Ly) + 1j * t4.Lx.matrix) <= 1e-12


def test_proj_examples():
    t = angular_momentum(2)
    assert np.allclose(proj(UP, t), [0, 0, 0.5])
    assert np.allclose(proj(PLUS, t), [0.5, 0, 0])
    assert np.allclose(proj(StateVector.basis(1, 0), angular_momentum(1)), 0)
    with pytest.raises(DimensionMismatch):
        proj(UP, angular_momentum(3))


def test_so3_residual():
    assert so3_commutator_residual(0.0) == 0
    assert so3_commutator_residual(1e-3) <= 10 * 1e-9
    r3, r4 = so3_commutator_residual(1e-3), so3_commutator_residual(1e-4)
    assert abs(np.log10(r3 / r4) - 3) <= 0.2


def test_rotation_matrices_orthogonal():
    for a in "xyz":
        R = rotation_matrix(a, 0.83)
        assert np.allclose(R @ R.T, np.eye(3), atol=1e-12) and np.linalg.det(R) == pytest.approx(1)


def test_proj_rotation_examples():
    t = angular_momentum(2)
    assert proj_rotation_check(PLUS, 0.0, t) <= 1e-15
    for th in (0.3, 2.0, 5.0):
        assert proj_rotation_check(UP, th, t) <= 1e-12
    w = StateVector.normalized(np.diag(np.exp(-1j * np.pi / 2 * np.array([0.5, -0.5]))) @ PLUS.amplitudes)
    # active convention: +x rotates to +y
    assert np.allclose(proj(w, t), [0, 0.5, 0], atol=1e-12)
    assert proj_rotation_check(PLUS, np.pi / 2, t) <= 1e-12


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_proj_rotation_haar(N):
    t = angular_momentum(N)
    rng = make_stream(N)
    for _ in range(50):
        v = haar_state(N, rng)
        for th in (0.1, 1.0, np.pi):
            for axis in "xyz":
                assert proj_rotation_check(v, th, t, axis) <= 1e-11


def test_conjugation():
    for N in (2, 3, 6):
        assert conjugation_residual(angular_momentum(N), 1.1) <= 1e-11


def test_precession():
    t = angular_momentum(3)
    up = StateVector.basis(3, 0)
    traj = precess(up, (0, 0, 2.0), 1.0, 1.0, np.linspace(0, 3, 7), t)
    assert np.allclose(traj, traj[0])
    traj = precess(haar_state(3, make_stream(0)), (0, 0, 0), 1.0, 1.0, np.linspace(0, 3, 7), t)
    assert np.allclose(traj, traj[0])

    t2 = angular_momentum(2)
    q, m, B = 1.0, 0.5, 3.0
    omega = abs(q * B / (2 * m))
    period = 2 * np.pi / omega
    grid = np.linspace(0, period, 33)
    traj = np.array(precess(PLUS, (0, 0, B), q, m, grid, t2))
    assert np.allclose(np.hypot(traj[:, 0], traj[:, 1]), 0.5, atol=1e-12)
    assert np.allclose(traj[:, 2], 0, atol=1e-12)
    assert np.linalg.norm(traj[-1] - traj[0]) <= 1e-10
    ang = np.unwrap(np.arctan2(traj[:, 1], traj[:, 0]))
    assert np.allclose(np.abs(np.diff(ang) / np.diff(grid)), omega)


@pytest.mark.parametrize("N,tol", [(2, 1e-13), (5, 1e-11)])
def test_bracket_defects(N, tol):
    recs = bracket_defect_check(angular_momentum(N), tol=tol)
    assert all(r.passed for r in recs), [r.name for r in recs if not r.passed]
    assert any("first-order" in r.name for r in recs)


def test_first_order_slope():
    for N in (2, 3, 5):
        _, slope = first_order_slope(angular_momentum(N), haar_state(N, make_stream(10 + N)))
        assert slope >= 2.7
