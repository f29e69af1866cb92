"""Checks of the q-number arithmetic against closed forms and mpmath."""

import math

import mpmath as mp
import numpy as np
import pytest

from qdimer import (
    DeformationParameter,
    basic_qnum,
    q_binomial,
    q_factorial,
    q_from_gamma,
    sym_qnum,
)


def test_q_from_gamma_values():
    dp = q_from_gamma(2.0)
    assert isinstance(dp, DeformationParameter)
    assert abs(dp.q - 0.7071067811865476) < 1e-15
    assert abs(dp.s - math.log(dp.q)) == 0.0
    assert q_from_gamma(6.0).q == 0.5
    assert q_from_gamma(0.0).q == 1.0


def test_q_from_gamma_rejects_negative():
    with pytest.raises(ValueError):
        q_from_gamma(-1.0)
    with pytest.raises(ValueError):
        q_from_gamma(float("nan"))


def test_sym_qnum_frozen_value():
    q = 1.0 / math.sqrt(2.0)
    assert abs(sym_qnum(2.0, q) - 2.1213203435596424) < 1e-15
    # [2] = q + 1/q exactly
    assert abs(sym_qnum(2.0, q) - (q + 1.0 / q)) < 1e-15


def test_sym_qnum_limits_and_symmetries():
    assert sym_qnum(5.0, 1.0) == 5.0
    assert sym_qnum(0.0, 0.3) == 0.0
    for q in (0.25, 0.5, 0.9, 1.7):
        for x in (0.5, 1.0, 2.0, 7.0):
            # odd in x, invariant under q -> 1/q
            assert abs(sym_qnum(-x, q) + sym_qnum(x, q)) < 1e-12
            assert abs(sym_qnum(x, q) - sym_qnum(x, 1.0 / q)) < 1e-12 * abs(sym_qnum(x, q))
    with pytest.raises(ValueError):
        sym_qnum(1.0, 0.0)
    with pytest.raises(ValueError):
        sym_qnum(1.0, -0.5)


def test_sym_qnum_against_mpmath():
    for q in (0.3, 0.7071067811865476, 0.95):
        for x in (1, 2, 3, 10, 25.5):
            with mp.workdps(50):
                qm = mp.mpf(q)
                ref = float((qm**x - qm**-x) / (qm - 1 / qm))
            got = sym_qnum(x, q)
            assert abs(got - ref) < 1e-13 * max(1.0, abs(ref))


def test_basic_qnum_frozen_values():
    # gamma=2 has base 2, so {n} = 2^n - 1
    assert basic_qnum(2, 2.0) == 3.0
    for n in range(12):
        assert abs(basic_qnum(n, 2.0) - (2.0**n - 1.0)) < 1e-12 * max(1.0, 2.0**n)
    assert basic_qnum(7, 0.0) == 7.0
    with pytest.raises(ValueError):
        basic_qnum(-1, 2.0)
    with pytest.raises(ValueError):
        basic_qnum(3, -0.1)


def test_basic_qnum_generating_identity():
    # 1 + (gamma/2){n} = (1 + gamma/2)^n, relative 1e-12 for n <= 30, gamma <= 10
    for gamma in (1e-6, 0.5, 2.0, 7.3, 10.0):
        for n in range(31):
            lhs = 1.0 + 0.5 * gamma * basic_qnum(n, gamma)
            rhs = (1.0 + 0.5 * gamma) ** n
            assert abs(lhs - rhs) < 1e-12 * abs(rhs)


def test_basic_qnum_step_is_commutator_weight():
    # {n+1} - {n} = (1 + gamma/2)^n is the [b, b'] eigenvalue on |n>
    for gamma in (0.5, 2.0, 8.0):
        for n in range(20):
            step = basic_qnum(n + 1, gamma) - basic_qnum(n, gamma)
            ref = (1.0 + 0.5 * gamma) ** n
            assert abs(step - ref) < 1e-11 * ref


def test_basic_equals_scaled_symmetric():
    # {n} = q^(1-n) [n] ties the two q-number families together
    for gamma in (0.3, 2.0, 6.0, 10.0):
        q = q_from_gamma(gamma).q
        for n in range(1, 25):
            lhs = basic_qnum(n, gamma)
            rhs = q ** (1 - n) * sym_qnum(n, q)
            assert abs(lhs - rhs) < 1e-11 * max(1.0, abs(lhs))


def test_q_factorial():
    q = 0.5
    assert q_factorial(0, q) == 1.0
    expect = sym_qnum(1, q) * sym_qnum(2, q) * sym_qnum(3, q)
    assert abs(q_factorial(3, q) - expect) < 1e-14 * expect
    with pytest.raises(ValueError):
        q_factorial(-2, q)


def test_q_binomial_frozen_value():
    q = 1.0 / math.sqrt(2.0)
    # [4 choose 2] = [3][4]/([1][2]) = 8.75 at q = 1/sqrt(2)
    assert abs(q_binomial(4, 2, q) - 8.75) < 1e-13
    assert q_binomial(5, 0, q) == 1.0
    assert q_binomial(5, 5, q) == 1.0


def test_q_binomial_symmetry_and_errors():
    q = 0.6
    for m in range(1, 9):
        for n in range(m + 1):
            a = q_binomial(m, n, q)
            b = q_binomial(m, m - n, q)
            assert abs(a - b) < 1e-12 * max(1.0, abs(a))
    with pytest.raises(ValueError):
        q_binomial(3, 4, q)
    with pytest.raises(ValueError):
        q_binomial(-1, 0, q)


def test_q_binomial_against_mpmath_ratio():
    for q in (0.4, 0.7071067811865476):
        for m, n in ((6, 2), (8, 3), (10, 5)):
            with mp.workdps(60):
                qm = mp.mpf(q)

                def s(x):
                    return (qm**x - qm**-x) / (qm - 1 / qm)

                num = mp.mpf(1)
                den = mp.mpf(1)
                for i in range(1, n + 1):
                    num *= s(m - n + i)
                    den *= s(i)
                ref = float(num / den)
            got = q_binomial(m, n, q)
            assert abs(got - ref) < 1e-12 * max(1.0, abs(ref))


def test_q_binomial_reduces_to_binomial():
    for m in range(9):
        for n in range(m + 1):
            assert abs(q_binomial(m, n, 1.0) - math.comb(m, n)) < 1e-12


def test_near_one_continuity():
    # values just inside and outside the analytic-limit window agree
    for x in (1.0, 3.0, 11.0):
        inside = sym_qnum(x, 1.0 + 5e-9)
        outside = sym_qnum(x, 1.0 + 5e-8)
        assert abs(inside - outside) < 1e-6 * abs(x)
    gamma_tiny = 1e-9
    for n in (1, 5, 17):
        assert abs(basic_qnum(n, gamma_tiny) - n) < 1e-7 * n


def test_randomized_q_identities():
    rng = np.random.default_rng(7)
    for _ in range(200):
        q = float(rng.uniform(0.2, 1.8))
        x = float(rng.uniform(0.0, 12.0))
        y = float(rng.uniform(0.0, 12.0))
        # addition rule [x+y] = [x] q^-y + q^x [y]
        lhs = sym_qnum(x + y, q)
        rhs = sym_qnum(x, q) * q**-y + q**x * sym_qnum(y, q)
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))
