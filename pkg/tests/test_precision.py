"""Core numerics: log-gamma contract and vertical-line quadrature oracles."""

import random

import mpmath
import pytest
from mpmath import mp

from siegellf.precision import (
    PoleOfGammaError,
    PrecisionContext,
    QuadratureError,
    log_gamma,
    vertical_line_integral,
)

CTX = PrecisionContext(working_digits=50, quad_tolerance=1e-30)


def test_log_gamma_trivial_values():
    with CTX.workdps():
        assert abs(log_gamma(1, CTX)) < mp.mpf(10) ** (-CTX.working_digits + 2)
        assert abs(log_gamma(5, CTX) - mp.log(24)) < mp.mpf(10) ** (-CTX.working_digits + 2)


def test_log_gamma_half_against_sqrt_pi():
    # independent oracle: Gamma(1/2) = sqrt(pi)
    with CTX.workdps():
        expected = mp.log(mp.sqrt(mp.pi))
        assert abs(log_gamma(0.5, CTX) - expected) < mp.mpf(10) ** (-CTX.working_digits + 2)
        assert mp.nstr(log_gamma(0.5, CTX), 8) == "0.57236494"


def test_log_gamma_pole_raises():
    for z in (0, -1, -7):
        with pytest.raises(PoleOfGammaError):
            log_gamma(z, CTX)


def test_log_gamma_recurrence_property():
    rng = random.Random(20)
    with CTX.workdps():
        tol = mp.mpf(10) ** (-CTX.working_digits + 3)
        for _ in range(25):
            z = mp.mpc(0.5 + 19.5 * rng.random(), 40 * (rng.random() - 0.5))
            err = abs(log_gamma(z + 1, CTX) - log_gamma(z, CTX) - mp.log(z))
            assert err < tol


def test_log_gamma_conjugation_symmetry():
    rng = random.Random(21)
    with CTX.workdps():
        tol = mp.mpf(10) ** (-CTX.working_digits + 3)
        for _ in range(10):
            z = mp.mpc(0.5 + 10 * rng.random(), 20 * (rng.random() - 0.5))
            assert abs(log_gamma(mp.conj(z), CTX) - mp.conj(log_gamma(z, CTX))) < tol


def cahen_mellin_reference(x):
    # (1/2 pi i) int Gamma(z) x^-z dz = exp(-x) for nu > 0
    with CTX.workdps():
        return mp.exp(-mp.mpf(x))


@pytest.mark.parametrize("x", [2, 1])
def test_vertical_line_integral_cahen_mellin(x):
    with CTX.workdps():
        f = lambda z: mp.gamma(z) * mp.mpf(x) ** (-z)
        val = vertical_line_integral(f, 2, CTX)
        assert abs(val - cahen_mellin_reference(x)) < 10 * CTX.quad_tolerance


def test_vertical_line_integral_zero_integrand():
    val = vertical_line_integral(lambda z: mp.mpc(0), 2, CTX)
    assert val == 0


def test_vertical_line_integral_contour_shift_independence():
    # no poles between the lines, so the value cannot move by more than 2 tol
    with CTX.workdps():
        f = lambda z: mp.gamma(z) * mp.mpf(2) ** (-z)
        v1 = vertical_line_integral(f, mp.mpf("1.5"), CTX)
        v2 = vertical_line_integral(f, mp.mpf("3.25"), CTX)
        assert abs(v1 - v2) < 2 * CTX.quad_tolerance


def test_vertical_line_integral_eval_budget():
    tiny = PrecisionContext(working_digits=30, quad_tolerance=1e-25, max_integrand_evals=40)
    with pytest.raises(QuadratureError):
        vertical_line_integral(lambda z: mp.gamma(z) * mp.mpf(2) ** (-z), 2, tiny)


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(working_digits=10)
    with pytest.raises(ValueError):
        PrecisionContext(quad_tolerance=0.0)
