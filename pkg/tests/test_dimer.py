"""Dimer builders: matrix elements, closed-form spectra, chain metadata."""

import math

import numpy as np
import pytest

from qdimer import (
    SpinSector,
    TridiagonalHamiltonian,
    build_dimer,
    build_qal_dimer,
    build_qdnls_dimer,
    dense_oracle,
    q_from_gamma,
    sym_qnum,
)


def test_spin_sector():
    s = SpinSector(5)
    assert s.j == 2.5
    assert s.dim == 6
    assert np.array_equal(s.m_values, np.array([-2.5, -1.5, -0.5, 0.5, 1.5, 2.5]))
    with pytest.raises(ValueError):
        SpinSector(-1)


def test_qdnls_matrix_elements():
    H = build_qdnls_dimer(3, 2.0)
    # diag (gamma/2) m^2 at m = -1.5 .. 1.5
    assert np.allclose(H.diag, [2.25, 0.25, 0.25, 2.25], atol=1e-15)
    # off_k = eps sqrt((2j - k)(k + 1))
    assert np.allclose(H.off, [math.sqrt(3.0), 2.0, math.sqrt(3.0)], atol=1e-15)
    H = build_qdnls_dimer(3, 2.0, epsilon=0.5)
    assert np.allclose(H.off, [0.5 * math.sqrt(3.0), 1.0, 0.5 * math.sqrt(3.0)], atol=1e-15)


def test_qal_matrix_elements():
    gamma = 2.0
    q = q_from_gamma(gamma).q
    H = build_qal_dimer(2, gamma)
    assert np.array_equal(H.diag, np.zeros(3))
    expect = [math.sqrt(sym_qnum(2, q) * sym_qnum(1, q)),
              math.sqrt(sym_qnum(1, q) * sym_qnum(2, q))]
    assert np.allclose(H.off, expect, atol=1e-15)


def test_qdnls_two_level_closed_form():
    # dim 2: eigenvalues gamma/8 +- eps
    for gamma, eps in ((4.0, 1.0), (2.0, 0.7), (0.0, 1.3)):
        H = build_qdnls_dimer(1, gamma, eps)
        evs = np.linalg.eigvalsh(H.to_dense())
        expect = np.sort([gamma / 8.0 - eps, gamma / 8.0 + eps])
        assert np.max(np.abs(evs - expect)) < 1e-14
    evs = np.linalg.eigvalsh(build_qdnls_dimer(1, 4.0).to_dense())
    assert np.max(np.abs(evs - np.array([-0.5, 1.5]))) < 1e-14


def test_linear_limit_spectra():
    # gamma=0 collapses both models onto the equally spaced ladder 2 m eps
    for two_j in (2, 4, 7):
        m = SpinSector(two_j).m_values
        evs = np.linalg.eigvalsh(build_qdnls_dimer(two_j, 0.0).to_dense())
        assert np.max(np.abs(evs - 2.0 * m)) < 1e-12
        evs = np.linalg.eigvalsh(build_qal_dimer(two_j, 0.0).to_dense())
        assert np.max(np.abs(evs - 2.0 * m)) < 1e-12


def test_qal_three_level_closed_form():
    # zero diagonal with equal couplings a: eigenvalues 0, +-sqrt(2) a
    gamma = 2.0
    q = q_from_gamma(gamma).q
    H = build_qal_dimer(2, gamma)
    evs = np.linalg.eigvalsh(H.to_dense())
    top = math.sqrt(2.0 * sym_qnum(2, q))
    assert np.max(np.abs(evs - np.array([-top, 0.0, top]))) < 1e-14
    assert abs(top - math.sqrt(3.0 * math.sqrt(2.0))) < 1e-14


def test_qal_two_level_is_unit_pair():
    # off coupling sqrt([1][1]) = 1 independent of gamma
    for gamma in (0.0, 2.0, 8.0):
        H = build_qal_dimer(1, gamma)
        evs = np.linalg.eigvalsh(H.to_dense())
        assert np.max(np.abs(evs - np.array([-1.0, 1.0]))) < 1e-14


def test_energy_metadata():
    H = build_qdnls_dimer(6, 2.0)
    assert H.energy_scale == -1.0
    assert abs(H.energy_shift + 0.5 * 2.0 * 3.0 * 3.0) < 1e-15
    assert H.params["chain_gamma"] == 1.0
    dp = q_from_gamma(3.0)
    H = build_qal_dimer(5, 3.0)
    assert abs(H.energy_scale + dp.q ** (0.5 - 2.5)) < 1e-15
    assert H.energy_shift == 10.0
    phys = H.to_physical(np.array([0.0, 1.0]))
    assert np.allclose(phys, [10.0, 10.0 + H.energy_scale], atol=1e-14)


def test_build_dimer_dispatch_and_errors():
    a = build_dimer("dnls", 3, 2.0, 0.5)
    b = build_qdnls_dimer(3, 2.0, 0.5)
    assert np.array_equal(a.diag, b.diag) and np.array_equal(a.off, b.off)
    with pytest.raises(ValueError):
        build_dimer("al", 3, 2.0, epsilon=0.5)
    with pytest.raises(ValueError):
        build_dimer("xxz", 3, 2.0)
    with pytest.raises(ValueError):
        build_qal_dimer(3, -1.0)


def test_two_j_zero_warns():
    with pytest.warns(UserWarning):
        H = build_qdnls_dimer(0, 2.0)
    assert H.dim == 1
    with pytest.warns(UserWarning):
        build_qal_dimer(0, 1.0)


def test_negative_gamma_dnls_warns():
    with pytest.warns(UserWarning):
        H = build_qdnls_dimer(2, -2.0)
    assert H.diag[0] == -1.0


def test_to_dense_symmetric():
    H = build_dimer("al", 5, 4.0)
    m = H.to_dense()
    assert np.array_equal(m, m.T)
    assert np.array_equal(np.diag(m), H.diag)
    assert np.array_equal(np.diag(m, 1), H.off)


def test_tridiagonal_validation():
    s = SpinSector(2)
    with pytest.raises(ValueError):
        TridiagonalHamiltonian(s, "dnls", np.zeros(2), np.zeros(2))
    with pytest.raises(ValueError):
        TridiagonalHamiltonian(s, "dnls", np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError):
        TridiagonalHamiltonian(s, "bad", np.zeros(3), np.zeros(2))


def test_spectrum_scale_grows_with_gamma():
    # the deformed couplings grow with nonlinearity at fixed size
    prev = 0.0
    for gamma in (0.5, 1.0, 2.0, 4.0, 8.0):
        top = np.max(np.abs(dense_oracle(build_qal_dimer(8, gamma)).eigenvalues))
        assert top > prev
        prev = top
