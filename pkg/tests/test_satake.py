"""Spinor quartic <-> Satake triple: oracle validation and round trips."""

import random

import mpmath
import pytest
from mpmath import mp

from siegellf.precision import PrecisionContext
from siegellf.satake import (
    PairingError,
    SatakeTriple,
    _weyl_orbit,
    _canonical,
    solve_satake,
    spinor_local_polynomial,
)

CTX = PrecisionContext(working_digits=50)


def random_unimodular_triple(rng):
    """(alpha0, alpha1, alpha2) on the unit circle with alpha0^2*alpha1*alpha2 = 1."""
    t1 = 2 * mp.pi * mp.mpf(rng.random())
    t2 = 2 * mp.pi * mp.mpf(rng.random())
    sign = 1 if rng.random() < 0.5 else -1
    a1 = mp.exp(1j * t1)
    a2 = mp.exp(1j * t2)
    a0 = sign * mp.exp(-1j * (t1 + t2) / 2)
    return a0, a1, a2


def spin_parameters(a0, a1, a2):
    return [a0, a0 * a1, a0 * a2, a0 * a1 * a2]


def expand_product(roots):
    """Brute-force coefficients of prod (1 - r X)."""
    coeffs = [mp.mpc(1)]
    for r in roots:
        nxt = [mp.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c
            nxt[i + 1] -= c * r
        coeffs = nxt
    return coeffs


def classical_eigenvalues(spin_params, k, p):
    """lambda(p), lambda(p^2) imposed by the classical Hecke relations:
    lambda(p) is the sum of the spin parameters and
    lambda(p^2) = lambda(p)^2 - e2 - p^(2k-4) with e2 the second elementary
    symmetric function (the local spinor series identity)."""
    e1 = sum(spin_params)
    e2 = mp.mpc(0)
    for i in range(4):
        for j in range(i + 1, 4):
            e2 += spin_params[i] * spin_params[j]
    lam_p = e1
    lam_p2 = e1 * e1 - e2 - mp.mpf(p) ** (2 * k - 4)
    return lam_p, lam_p2


def test_spinor_polynomial_matches_symmetric_function_oracle():
    # validates the explicit quartic before anything downstream relies on it
    rng = random.Random(101)
    k, p = 20, 3
    with mp.workdps(90):
        scale = mp.mpf(p) ** (mp.mpf(2 * k - 3) / 2)
        for _ in range(30):
            a0n, a1, a2 = random_unimodular_triple(rng)
            a0 = a0n * scale
            params = spin_parameters(a0, a1, a2)
            lam_p, lam_p2 = classical_eigenvalues(params, k, p)
            got = spinor_local_polynomial((lam_p, lam_p2), k, p)
            want = expand_product(params)
            norm = max(abs(c) for c in want)
            for g, w in zip(got, want):
                assert abs(mp.mpc(g) - w) / norm < mp.mpf(10) ** -70


def test_spinor_polynomial_fixed_coefficients():
    k, p = 20, 2
    poly = spinor_local_polynomial((-840960, 248256200704), k, p)
    assert poly[0] == 1
    assert poly[1] == 840960  # -lambda(p)
    assert poly[4] == p ** (4 * k - 6)
    assert poly[3] == 840960 * p ** (2 * k - 3)


def test_solve_satake_degenerate_quartic():
    k, p = 20, 2
    with mp.workdps(300):
        c = mp.mpf(p) ** (mp.mpf(2 * k - 3) / 2)
        poly = [1, -4 * c, 6 * c**2, -4 * c**3, c**4]
        triple = solve_satake(poly, k, p, CTX)
        for a in triple.alphas:
            assert abs(a - 1) < mp.mpf(10) ** -40


def test_solve_satake_round_trip_up_to_weyl():
    rng = random.Random(7)
    k, p = 20, 5
    failures = 0
    with mp.workdps(90):
        scale = mp.mpf(p) ** (mp.mpf(2 * k - 3) / 2)
        for _ in range(100):
            a0n, a1, a2 = random_unimodular_triple(rng)
            poly = expand_product(spin_parameters(a0n * scale, a1, a2))
            got = solve_satake(poly, k, p, CTX)
            want = _canonical(_weyl_orbit(a0n, a1, a2), mp.mpf("1e-40"))
            err = max(abs(g - w) for g, w in zip(got.alphas, want))
            if err > mp.mpf(10) ** -30:
                failures += 1
    assert failures == 0


def test_solve_satake_residuals():
    rng = random.Random(12)
    k, p = 20, 7
    with mp.workdps(90):
        scale = mp.mpf(p) ** (mp.mpf(2 * k - 3) / 2)
        a0n, a1, a2 = random_unimodular_triple(rng)
        params = spin_parameters(a0n * scale, a1, a2)
        poly = expand_product(params)
        triple = solve_satake(poly, k, p, CTX)
        recovered = [
            triple.alpha0 * scale,
            triple.alpha0 * triple.alpha1 * scale,
            triple.alpha0 * triple.alpha2 * scale,
            triple.alpha0 * triple.alpha1 * triple.alpha2 * scale,
        ]
        for r in recovered:
            value = sum(c * r ** -i for i, c in enumerate(poly))
            scale_mag = sum(abs(c) * abs(r) ** -i for i, c in enumerate(poly))
            assert abs(value) <= mp.mpf(10) ** (-CTX.working_digits + 5) * scale_mag


def test_solve_satake_pairing_failure():
    # roots with no pairing multiplying to p^(2k-3)
    k, p = 20, 2
    with mp.workdps(80):
        roots = [mp.mpf(1), mp.mpf(2), mp.mpf(3), mp.mpf(5)]
        poly = expand_product(roots)
        with pytest.raises(PairingError):
            solve_satake(poly, k, p, CTX)


def test_canonical_representative_is_deterministic():
    rng = random.Random(3)
    k, p = 20, 11
    with mp.workdps(90):
        scale = mp.mpf(p) ** (mp.mpf(2 * k - 3) / 2)
        a0n, a1, a2 = random_unimodular_triple(rng)
        poly = expand_product(spin_parameters(a0n * scale, a1, a2))
        t1 = solve_satake(poly, k, p, CTX)
        t2 = solve_satake(poly, k, p, CTX)
        assert t1.alphas == t2.alphas
        assert mp.im(t1.alpha1) >= -mp.mpf("1e-20")
        assert mp.im(t1.alpha2) >= -mp.mpf("1e-20")
        assert mp.re(t1.alpha1) >= mp.re(t1.alpha2) - mp.mpf("1e-40")
