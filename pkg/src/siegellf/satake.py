"""Satake parameters at a prime, recovered from Hecke eigenvalues via the spinor quartic."""

from __future__ import annotations

import dataclasses
from fractions import Fraction

import mpmath
from mpmath import mp

from .hecke import HeckeEigenvalues
from .precision import DEFAULT_CONTEXT, PrecisionContext

RAMANUJAN_TOL = mpmath.mpf("1e-20")


class PairingError(ArithmeticError):
    """The quartic's roots admit no partition into pairs of product p^(2k-3)."""


class RamanujanViolationError(ArithmeticError):
    """A normalized Satake parameter is off the unit circle beyond tolerance."""


@dataclasses.dataclass(frozen=True)
class SatakeTriple:
    """Normalized local parameters (alpha0, alpha1, alpha2) at p.

    Normalization: |alpha_j| = 1 and alpha0^2*alpha1*alpha2 = 1.
    """

    p: int
    alpha0: mpmath.mpc
    alpha1: mpmath.mpc
    alpha2: mpmath.mpc

    @property
    def alphas(self):
        return (self.alpha0, self.alpha1, self.alpha2)

    def check(self, ctx: PrecisionContext = DEFAULT_CONTEXT):
        with ctx.workdps():
            sym = abs(self.alpha0**2 * self.alpha1 * self.alpha2 - 1)
            if sym > mpmath.mpf(10) ** (-ctx.working_digits // 2):
                raise RamanujanViolationError(f"alpha0^2*alpha1*alpha2 != 1 at p={self.p}: {sym}")
            for a in self.alphas:
                if abs(abs(a) - 1) > RAMANUJAN_TOL:
                    raise RamanujanViolationError(
                        f"| |alpha|-1 | = {abs(abs(a)-1)} at p={self.p}"
                    )
        return self


def spinor_local_polynomial(row, k: int, p: int) -> list:
    """Exact coefficients [X^0..X^4] of the unnormalized local spinor polynomial.

    Q(X) = 1 - lam_p X + (lam_p^2 - lam_p2 - p^(2k-4)) X^2
             - lam_p p^(2k-3) X^3 + p^(4k-6) X^4,
    whose reciprocal roots are {a0, a0*a1, a0*a2, a0*a1*a2} with
    a0^2*a1*a2 = p^(2k-3).
    """
    if k < 4:
        raise ValueError("weight must be >= 4")
    lam_p, lam_p2 = row
    c2 = lam_p * lam_p - lam_p2 - p ** (2 * k - 4)
    return [1, -lam_p, c2, -lam_p * p ** (2 * k - 3), p ** (4 * k - 6)]


def _weyl_orbit(a0, a1, a2):
    orbit = []
    for flip1 in (False, True):
        for flip2 in (False, True):
            b0, b1, b2 = a0, a1, a2
            if flip1:
                b0, b1 = b0 * b1, 1 / b1
            if flip2:
                b0, b2 = b0 * b2, 1 / b2
            orbit.append((b0, b1, b2))
            orbit.append((b0, b2, b1))
    return orbit


def _canonical(triples, tol):
    # Im(alpha1) >= 0, Im(alpha2) >= 0, then Re(alpha1) >= Re(alpha2);
    # remaining freedom resolved on alpha0 so output is deterministic.
    eligible = [t for t in triples if mp.im(t[1]) >= -tol and mp.im(t[2]) >= -tol]
    if not eligible:
        eligible = triples

    def key(t):
        return (
            mp.re(t[1]),
            mp.re(t[2]),
            mp.im(t[1]),
            mp.im(t[2]),
            mp.re(t[0]),
            mp.im(t[0]),
        )

    return max(eligible, key=key)


def solve_satake(poly, k: int, p: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SatakeTriple:
    """Root-find the spinor quartic and extract the normalized Satake triple.

    The four reciprocal roots are partitioned into two pairs with product
    p^(2k-3) (PairingError if impossible), a0 is rescaled by p^(-(2k-3)/2),
    and the result is put into a canonical Weyl-chamber representative.
    """
    # repeated roots cost a fourth root of the coefficient precision, so run
    # the closed-form solve well above the output precision
    with mp.workdps(4 * ctx.dps + 20):
        scale = mp.mpf(p) ** (mp.mpf(2 * k - 3) / 2)
        q = mp.mpf(p) ** (2 * k - 3)
        # reciprocal roots of Q(X) are the roots of the reversed monic quartic
        # Y^4 + c1 Y^3 + c2 Y^2 + c3 Y + c4
        one, c1, c2, c3, c4 = (mpmath.mpmathify(c) for c in poly)
        pair_tol = mp.mpf(10) ** (-ctx.working_digits // 2)
        # symplectic shape: pairs multiplying to q force c3 = q*c1, c4 = q^2
        if abs(c4 / q**2 - 1) > pair_tol or abs(c3 - q * c1) > pair_tol * q * (1 + abs(c1)):
            raise PairingError(
                f"quartic at p={p} is not symplectic: no root pairing with product p^(2k-3)"
            )
        # substituting w = Y + q/Y splits the quartic into the two pairs
        # {roots of Y^2 - w_i Y + q}, each with product q
        e1, e2 = -c1, c2
        disc_w = mp.sqrt(e1 * e1 - 4 * (e2 - 2 * q))
        w1, w2 = (e1 + disc_w) / 2, (e1 - disc_w) / 2

        def pair_roots(w):
            d = mp.sqrt(w * w - 4 * q)
            return (w + d) / 2, (w - d) / 2

        quartic = [one, c1, c2, c3, c4]

        def newton_polish(y):
            der_scale = sum(abs(c) * abs(y) ** (3 - i) * (4 - i) for i, c in enumerate(quartic[:-1]))
            for _ in range(3):
                val = mp.mpc(0)
                der = mp.mpc(0)
                for c in quartic:
                    der = der * y + val
                    val = val * y + c
                if abs(der) < der_scale * mp.mpf("1e-10"):  # near-multiple root: keep closed form
                    return y
                y = y - val / der
            return y

        r1a, r1b = (newton_polish(r) for r in pair_roots(w1))
        r2a, r2b = (newton_polish(r) for r in pair_roots(w2))
        a0 = r1a
        a1 = r2a / a0
        a2 = r2b / a0
        alpha0 = a0 / scale
        orbit = _weyl_orbit(alpha0, a1, a2)
        b0, b1, b2 = _canonical(orbit, RAMANUJAN_TOL)

    with ctx.workdps():
        triple = SatakeTriple(p=p, alpha0=+b0, alpha1=+b1, alpha2=+b2)
    return triple.check(ctx)


def satake_parameters(
    data: HeckeEigenvalues, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> dict[int, SatakeTriple]:
    """Normalized triples for every prime in the dataset."""
    out = {}
    for p in data.primes:
        poly = spinor_local_polynomial(data.rows[p], data.weight, p)
        out[p] = solve_satake(poly, data.weight, p, ctx)
    return out
