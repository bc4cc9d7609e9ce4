"""Local Euler factors for the five built-in representations and global Dirichlet coefficients."""

from __future__ import annotations

import dataclasses
from math import comb

import mpmath
from mpmath import mp

from .precision import DEFAULT_CONTEXT, PrecisionContext
from .satake import SatakeTriple


@dataclasses.dataclass(frozen=True)
class Representation:
    """A named weight multiset; each (e0, e1, e2) denotes the character
    alpha0^e0 * alpha1^e1 * alpha2^e2."""

    name: str
    weights: tuple[tuple[int, int, int], ...]

    @property
    def dimension(self) -> int:
        return len(self.weights)


SPIN = Representation("spin", ((1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)))
STAN = Representation("stan", ((0, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)))
ADJ = Representation(
    "adj",
    (
        (0, 0, 0),
        (0, 0, 0),
        (0, 1, 0),
        (0, -1, 0),
        (0, 0, 1),
        (0, 0, -1),
        (0, 1, 1),
        (0, -1, 1),
        (0, 1, -1),
        (0, -1, -1),
    ),
)
RHO14 = Representation(
    "rho14",
    (
        (0, 0, 0),
        (0, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (0, -1, 0),
        (0, 0, -1),
        (0, 2, 0),
        (0, 0, 2),
        (0, -2, 0),
        (0, 0, -2),
        (0, 1, 1),
        (0, 1, -1),
        (0, -1, 1),
        (0, -1, -1),
    ),
)
RHO16 = Representation(
    "rho16",
    (
        (1, 0, 0),
        (1, 0, 0),
        (1, 1, 0),
        (1, 1, 0),
        (1, 0, 1),
        (1, 0, 1),
        (1, 1, 1),
        (1, 1, 1),
        (1, -1, 0),
        (1, 0, -1),
        (1, 2, 0),
        (1, 0, 2),
        (1, 1, -1),
        (1, -1, 1),
        (1, 2, 1),
        (1, 1, 2),
    ),
)

REPRESENTATIONS: dict[str, Representation] = {
    r.name: r for r in (SPIN, STAN, ADJ, RHO14, RHO16)
}


def _ipow(base, e: int):
    return base**e if e >= 0 else (1 / base) ** (-e)


def character_values(triple: SatakeTriple, rep: Representation):
    a0, a1, a2 = triple.alphas
    return [_ipow(a0, e0) * _ipow(a1, e1) * _ipow(a2, e2) for (e0, e1, e2) in rep.weights]


def local_factor(
    triple: SatakeTriple, rep: Representation, ctx: PrecisionContext = DEFAULT_CONTEXT
) -> list:
    """Coefficients [X^0..X^dim] of prod over weights of (1 - chi(w) X)."""
    with ctx.workdps():
        coeffs = [mp.mpc(1)]
        for chi in character_values(triple, rep):
            nxt = [mp.mpc(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                nxt[i] += c
                nxt[i + 1] -= c * chi
            coeffs = nxt
        return coeffs


def _smallest_prime_factors(n: int) -> list[int]:
    spf = list(range(n + 1))
    for p in range(2, int(n**0.5) + 1):
        if spf[p] == p:
            for q in range(p * p, n + 1, p):
                if spf[q] == q:
                    spf[q] = p
    return spf


def factorize(n: int, spf: list[int] | None = None) -> list[tuple[int, int]]:
    if spf is None:
        out = []
        d = 2
        while d * d <= n:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e:
                out.append((d, e))
            d += 1
        if n > 1:
            out.append((n, 1))
        return out
    out = []
    while n > 1:
        p = spf[n]
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


@dataclasses.dataclass
class CoefficientTable:
    """Dirichlet coefficients b_1..b_N with a known/unknown mask.

    known[n] is true iff every prime factor of n is <= prime_bound; unknown
    entries are stored as 0 and carried separately by the error budget.
    """

    rep: Representation
    N: int
    b: list  # index 0 unused; b[n] for 1 <= n <= N
    known: list[bool]
    prime_bound: int

    def coefficient(self, n: int):
        return self.b[n]

    def is_known(self, n: int) -> bool:
        return self.known[n]


def invert_power_series(coeffs, order: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """First ``order+1`` coefficients of 1/Q(X) for Q with constant term 1."""
    with ctx.workdps():
        inv = [mp.mpc(1)] + [mp.mpc(0)] * order
        deg = len(coeffs) - 1
        for m in range(1, order + 1):
            acc = mp.mpc(0)
            for i in range(1, min(m, deg) + 1):
                acc += coeffs[i] * inv[m - i]
            inv[m] = -acc
        return inv


def dirichlet_coefficients(
    factors: dict[int, list],
    rep: Representation,
    N: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> CoefficientTable:
    """Expand prod_p Q_p(p^-s)^-1 into b_n for n <= N, flagging smooth n as known."""
    prime_bound = max(factors) if factors else 1
    spf = _smallest_prime_factors(N)
    with ctx.workdps():
        prime_powers: dict[int, list] = {}
        for p, coeffs in factors.items():
            if p > N:
                continue
            order = 0
            pk = p
            while pk <= N:
                order += 1
                pk *= p
            prime_powers[p] = invert_power_series(coeffs, order, ctx)
        b = [mp.mpc(0)] * (N + 1)
        known = [False] * (N + 1)
        b[1] = mp.mpc(1)
        known[1] = True
        for n in range(2, N + 1):
            fac = factorize(n, spf)
            if any(p > prime_bound for p, _ in fac):
                continue
            val = mp.mpc(1)
            for p, e in fac:
                val *= prime_powers[p][e]
            b[n] = val
            known[n] = True
    return CoefficientTable(rep=rep, N=N, b=b, known=known, prime_bound=prime_bound)


def ramanujan_bound(n: int, rep: Representation) -> int:
    """Multiplicative bound prod_{p^m || n} C(dim+m-1, m) dominating |b_n|
    when all local parameters are unimodular."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = rep.dimension
    out = 1
    for _, m in factorize(n):
        out *= comb(d + m - 1, m)
    return out
