import numpy as np
import pytest

from avcp.dynamics import heisenberg_step_expectation, propagator
from avcp.errors import DomainError, InvalidWidth
from avcp.lattice import (
    LatticeConfig,
    canonical_defect,
    displacement_operator,
    ehrenfest_rate,
    fractional_shift_residual,
    gaussian_packet,
    lattice_momentum,
    lattice_position,
    mean_momentum,
    mean_position,
    plane_wave,
    shift_compare,
    shifted_position_check,
    translate,
    uniform_state,
)
from avcp.opcore import StateVector, equal_up_to_phase, expectation, haar_state, make_stream, op_norm

CFG = LatticeConfig()


def test_config_validation():
    with pytest.raises(ValueError):
        LatticeConfig(M=2)
    with pytest.raises(ValueError):
        LatticeConfig(a=0)


def test_position_examples():
    c = LatticeConfig(M=4)
    assert np.allclose(np.diag(lattice_position(c).matrix).real, [-2, -1, 0, 1])
    assert expectation(lattice_position(CFG), StateVector.basis(CFG.M, 17)) == CFG.x[17]
    assert abs(mean_position(gaussian_packet(CFG, 0.0, 8.0), CFG)) <= 1e-12


def test_momentum_examples():
    P = lattice_momentum(CFG)
    assert op_norm(P.matrix - P.matrix.conj().T) <= 1e-12
    for m in (0, 3, CFG.M // 2, CFG.M - 1):
        w = plane_wave(CFG, m)
        assert np.allclose(P.matrix @ w.amplitudes, CFG.hbar * CFG.k[m] * w.amplitudes, atol=1e-12)
    assert abs(expectation(P, uniform_state(CFG))) <= 1e-14
    for k0 in (0.3, -1.1, np.pi / 2):
        assert mean_momentum(gaussian_packet(CFG, 0.0, 8.0, k0), CFG) == pytest.approx(k0, abs=1e-8)


def test_wavenumbers_in_brillouin_zone():
    k = LatticeConfig(M=16, a=0.5).k
    assert k.max() == pytest.approx(np.pi / 0.5) and k.min() > -np.pi / 0.5


def test_displacement_moves_site_forward():
    c = LatticeConfig(M=64)
    D = displacement_operator(c)
    U = propagator(D, c.a)
    for n in (0, 10, 63):
        out = StateVector.normalized(U @ StateVector.basis(c.M, n).amplitudes)
        # psi(x) -> psi(x - a): the site-n delta moves to site n + 1
        assert equal_up_to_phase(out, StateVector.basis(c.M, (n + 1) % c.M))
        assert np.allclose(out.amplitudes, StateVector.basis(c.M, (n + 1) % c.M).amplitudes, atol=1e-12)
    assert op_norm(propagator(D, 0.0) - np.eye(c.M)) <= 1e-12
    assert op_norm(propagator(D, c.M * c.a) - np.eye(c.M)) <= 1e-10


def test_shift_compare():
    c = LatticeConfig(M=64)
    rng = make_stream(1)
    for _ in range(5):
        v = haar_state(c.M, rng)
        assert shift_compare(v, 0, c) <= 1e-12
        assert shift_compare(v, 1, c) <= 1e-12
        assert shift_compare(v, -3, c) <= 1e-12
        assert shift_compare(v, c.M, c) <= 1e-10


def test_fractional_shift_matches_interpolation():
    for eps in (0.25, 1.7, -4.3):
        assert fractional_shift_residual(gaussian_packet(CFG, 5.0, 8.0, 0.4), eps, CFG) <= 1e-8


def test_parseval():
    v = haar_state(CFG.M, make_stream(2))
    assert abs(np.linalg.norm(np.fft.fft(v.amplitudes, norm="ortho")) - 1) <= 1e-12


def test_canonical_defect():
    g = gaussian_packet(CFG, 0.0, 8.0)
    assert canonical_defect(g, CFG) <= 1e-6 * CFG.hbar
    assert canonical_defect(g, CFG, scaled=True) <= 1e-6
    c = LatticeConfig(hbar=0.3)
    assert canonical_defect(gaussian_packet(c, 0.0, 8.0), c) <= 1e-6 * c.hbar
    # a uniform state is spread over the boundary and breaks the relation
    assert canonical_defect(uniform_state(CFG), CFG) == pytest.approx(CFG.hbar)


def test_gaussian_packet():
    with pytest.raises(InvalidWidth):
        gaussian_packet(CFG, 0.0, 0.5)
    with pytest.raises(DomainError):
        gaussian_packet(CFG, 0.0, 8.0, 4.0)
    g = gaussian_packet(CFG, 0.0, CFG.M * CFG.a / 4)
    assert abs(np.linalg.norm(g.amplitudes) - 1) <= 1e-12
    # symmetric about the lattice midpoint: exact mean even for wide packets
    mid = -CFG.a / 2
    assert mean_position(gaussian_packet(CFG, mid, CFG.M * CFG.a / 8), CFG) == pytest.approx(mid, abs=1e-9)
    for c in (-20.0, 0.0, 13.0):
        assert mean_position(gaussian_packet(CFG, c, 8.0), CFG) == pytest.approx(c, abs=1e-9)


def test_width_is_position_spread():
    g = gaussian_packet(CFG, 0.0, 6.0)
    var = np.sum(CFG.x ** 2 * np.abs(g.amplitudes) ** 2)
    assert np.sqrt(var) == pytest.approx(6.0, rel=1e-9)


def test_displaced_frame():
    g = gaussian_packet(CFG, -10.0, 8.0, 0.6)
    p0 = mean_momentum(g, CFG)
    for s in (1, 5, 12):
        w = translate(g, s * CFG.a, CFG)
        assert mean_position(w, CFG) == pytest.approx(mean_position(g, CFG) + s * CFG.a, abs=1e-9)
        assert mean_momentum(w, CFG) == pytest.approx(p0, abs=1e-9)
    P, D = lattice_momentum(CFG).matrix, displacement_operator(CFG).matrix
    assert op_norm(P @ D - D @ P) <= 1e-12


def test_shifted_position():
    assert shifted_position_check(CFG, 0.37) == 0


def test_ehrenfest_massless():
    for c in (1.0, -2.5):
        g = gaussian_packet(CFG, 0.0, 8.0, 0.3)
        assert ehrenfest_rate(g, c, 0.5, CFG) == pytest.approx(c, abs=1e-6 * abs(c))
        X, H = lattice_position(CFG), lattice_momentum(CFG).scale(c)
        dt = 1e-3
        pred = heisenberg_step_expectation(X, H, g, dt, CFG.hbar)
        assert (pred - expectation(X, g)) / dt == pytest.approx(c, abs=1e-6 * abs(c))
