"""Completed-L-function descriptors (Q, gamma shifts, epsilon) for the built-in representations.

Descriptors exist in two forms: hard-coded tables per representation, and a
derivation from the archimedean parameter of the weight-k discrete series,
decomposed into one- and two-dimensional pieces.  The two must agree.
"""

from __future__ import annotations

import dataclasses
from collections import Counter
from fractions import Fraction

import mpmath
from mpmath import mp

from .euler import REPRESENTATIONS, Representation
from .precision import DEFAULT_CONTEXT, PrecisionContext, mpf_from_fraction


class UnsupportedRepresentationError(ValueError):
    pass


class UnpairedFrequencyError(ValueError):
    """Nonzero archimedean frequencies failed to pair off (broken weight multiset)."""


@dataclasses.dataclass(frozen=True)
class FunctionalEquationData:
    """Data of Lambda(s) = Q^s * prod_j Gamma(kappa_j s + lambda_j) * L(s)
    with Lambda(s) = epsilon * conj(Lambda(1 - conj(s))).

    Q is kept exact as 2^(-two_exp) * pi^(-pi_exp); gamma_shifts is a tuple of
    exact (kappa_j, lambda_j) pairs.
    """

    rep_name: str
    two_exp: Fraction
    pi_exp: Fraction
    gamma_shifts: tuple[tuple[Fraction, Fraction], ...]
    epsilon: int

    def __post_init__(self):
        if abs(self.epsilon) != 1:
            raise ValueError("|epsilon| must be 1")
        if any(lam < 0 for _, lam in self.gamma_shifts):
            raise ValueError("all Re(lambda_j) must be >= 0")

    @property
    def degree(self) -> int:
        d = 2 * sum(kappa for kappa, _ in self.gamma_shifts)
        assert d.denominator == 1
        return int(d)

    def q_value(self, ctx: PrecisionContext = DEFAULT_CONTEXT):
        with ctx.workdps():
            return mp.mpf(2) ** mpf_from_fraction(-self.two_exp) * mp.pi ** mpf_from_fraction(-self.pi_exp)

    def sorted_shifts(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple(sorted(self.gamma_shifts))

    def gamma_product(self, s, ctx: PrecisionContext = DEFAULT_CONTEXT):
        """prod_j Gamma(kappa_j s + lambda_j) at the point s."""
        with ctx.workdps():
            s = mpmath.mpmathify(s)
            acc = mp.mpc(1)
            for kappa, lam in self.gamma_shifts:
                acc *= mp.gamma(mpf_from_fraction(kappa) * s + mpf_from_fraction(lam))
            return acc

    def log_gamma_product(self, s, ctx: PrecisionContext = DEFAULT_CONTEXT):
        with ctx.workdps():
            s = mpmath.mpmathify(s)
            acc = mp.mpc(0)
            for kappa, lam in self.gamma_shifts:
                acc += mp.loggamma(mpf_from_fraction(kappa) * s + mpf_from_fraction(lam))
            return acc

    def completed_prefactor(self, s, ctx: PrecisionContext = DEFAULT_CONTEXT):
        """gamma(s) = Q^s * prod_j Gamma(kappa_j s + lambda_j)."""
        with ctx.workdps():
            s = mpmath.mpmathify(s)
            return self.q_value(ctx) ** s * self.gamma_product(s, ctx)

    def gamma_r_shifts(self) -> list[Fraction]:
        """Shift multiset after rewriting every factor as Gamma_R(s + mu).

        Gamma(s + a) becomes Gamma_R(s+a) Gamma_R(s+a+1) (duplication) and
        Gamma(s/2 + b) becomes Gamma_R(s + 2b); constants are absorbed.
        """
        mus: list[Fraction] = []
        for kappa, lam in self.gamma_shifts:
            if kappa == 1:
                mus.extend([lam, lam + 1])
            elif kappa == Fraction(1, 2):
                mus.append(2 * lam)
            else:
                raise ValueError(f"unsupported kappa={kappa}")
        return sorted(mus)

    def reduced_conductor(self, ctx: PrecisionContext = DEFAULT_CONTEXT):
        """Q~ in the Gamma_R normalization: Q * (2pi)^#(kappa=1) * pi^(#(kappa=1/2)/2)."""
        n_full = sum(1 for kappa, _ in self.gamma_shifts if kappa == 1)
        n_half = len(self.gamma_shifts) - n_full
        with ctx.workdps():
            return (
                self.q_value(ctx)
                * (2 * mp.pi) ** n_full
                * mp.pi ** (mp.mpf(n_half) / 2)
            )

    def serialize(self) -> str:
        parts = [f"2^-{self.two_exp}*pi^-{self.pi_exp}"]
        for kappa, lam in self.gamma_shifts:
            parts.append(str(kappa))
            parts.append(str(lam))
        parts.append(f"{self.epsilon:+d}")
        return " ".join(parts)


@dataclasses.dataclass(frozen=True)
class WeilSummand:
    """An irreducible archimedean piece: a sign character or a two-dimensional
    piece phi_{ell,t}."""

    kind: str  # one_dim_plus | one_dim_minus | two_dim
    ell: int = 0
    t: complex = 0

    def __post_init__(self):
        if self.kind not in ("one_dim_plus", "one_dim_minus", "two_dim"):
            raise ValueError(f"bad kind {self.kind}")
        if self.kind == "two_dim" and self.ell < 1:
            raise ValueError("two_dim requires ell >= 1")


def _halves(x) -> Fraction:
    return Fraction(x, 2)


def builtin_fe(rep: Representation | str, k: int) -> FunctionalEquationData:
    """Hard-coded descriptor tables for the five built-ins at even weight k >= 10."""
    name = rep if isinstance(rep, str) else rep.name
    if name not in REPRESENTATIONS:
        raise UnsupportedRepresentationError(f"no built-in descriptor for {name!r}")
    if k % 2 != 0 or k < 10:
        raise ValueError("weight must be even and >= 10")
    half = Fraction(1, 2)
    one = Fraction(1)
    if name == "spin":
        shifts = ((one, _halves(1)), (one, Fraction(k) - _halves(3)))
        return FunctionalEquationData("spin", Fraction(2), Fraction(2), shifts, (-1) ** k)
    if name == "stan":
        shifts = ((half, Fraction(0)), (one, Fraction(k - 2)), (one, Fraction(k - 1)))
        return FunctionalEquationData("stan", Fraction(2), _halves(5), shifts, 1)
    if name == "adj":
        shifts = (
            (half, half),
            (half, half),
            (one, Fraction(1)),
            (one, Fraction(k - 2)),
            (one, Fraction(k - 1)),
            (one, Fraction(2 * k - 3)),
        )
        return FunctionalEquationData("adj", Fraction(4), Fraction(5), shifts, 1)
    if name == "rho14":
        shifts = (
            (half, Fraction(0)),
            (half, Fraction(0)),
            (one, Fraction(1)),
            (one, Fraction(k - 2)),
            (one, Fraction(k - 1)),
            (one, Fraction(2 * k - 4)),
            (one, Fraction(2 * k - 3)),
            (one, Fraction(2 * k - 2)),
        )
        return FunctionalEquationData("rho14", Fraction(6), Fraction(7), shifts, 1)
    # rho16
    shifts = (
        (one, half),
        (one, half),
        (one, Fraction(k) - _halves(5)),
        (one, Fraction(k) - _halves(3)),
        (one, Fraction(k) - _halves(3)),
        (one, Fraction(k) - _halves(1)),
        (one, Fraction(2 * k) - _halves(5)),
        (one, Fraction(2 * k) - _halves(7)),
    )
    return FunctionalEquationData("rho16", Fraction(8), Fraction(8), shifts, -1)


# sign characters carried by the zero-frequency weights, matched against the
# completed functional equations (not derived from the j-action)
_ZERO_WEIGHT_SIGNS = {
    "spin": (),
    "stan": ("one_dim_plus",),
    "adj": ("one_dim_minus", "one_dim_minus"),
    "rho14": ("one_dim_plus", "one_dim_plus"),
    "rho16": (),
}


def archimedean_frequencies(rep: Representation, k: int) -> list[int]:
    """m = e0*(2k-3) + e1*(4-2k) + e2*(2-2k) for each weight (e0, e1, e2)."""
    m0, m1, m2 = 2 * k - 3, 4 - 2 * k, 2 - 2 * k
    return [e0 * m0 + e1 * m1 + e2 * m2 for (e0, e1, e2) in rep.weights]


def derive_archimedean(
    rep: Representation | str, k: int
) -> tuple[list[WeilSummand], FunctionalEquationData]:
    """Decompose rep composed with the weight-k archimedean parameter into
    irreducible summands, and convert those to a completed-L descriptor.

    Each +/-m frequency pair becomes a two-dimensional summand with ell = |m|,
    t = 0; zero frequencies become sign characters with signs taken as data.
    """
    rep = REPRESENTATIONS[rep] if isinstance(rep, str) else rep
    if rep.name not in _ZERO_WEIGHT_SIGNS:
        raise UnsupportedRepresentationError(f"no archimedean data for {rep.name!r}")
    if k < 4:
        raise ValueError("weight must be >= 4")
    freqs = archimedean_frequencies(rep, k)
    counts = Counter(m for m in freqs if m != 0)
    summands: list[WeilSummand] = []
    for m in sorted(c for c in counts if c > 0):
        if counts[m] != counts.get(-m, 0):
            raise UnpairedFrequencyError(
                f"frequency {m} occurs {counts[m]} times but -{m} occurs "
                f"{counts.get(-m, 0)} times"
            )
        summands.extend(WeilSummand("two_dim", ell=m) for _ in range(counts[m]))
    n_zero = sum(1 for m in freqs if m == 0)
    signs = _ZERO_WEIGHT_SIGNS[rep.name]
    if len(signs) != n_zero:
        raise UnpairedFrequencyError(
            f"{rep.name} has {n_zero} zero-frequency weights, expected {len(signs)}"
        )
    summands = [WeilSummand(kind) for kind in signs] + summands

    # L(s, phi_{ell,t}) = 2 (2pi)^(-(s+t+ell/2)) Gamma(s+t+ell/2): kappa=1,
    # lambda=ell/2, Q-part 1/(2pi).  Sign characters give Gamma_R(s) or
    # Gamma_R(s+1): kappa=1/2, lambda in {0, 1/2}, Q-part 1/sqrt(pi).
    shifts: list[tuple[Fraction, Fraction]] = []
    n_two = n_one = 0
    eps_exp = 0  # epsilon = i^eps_exp
    for sm in summands:
        if sm.kind == "two_dim":
            shifts.append((Fraction(1), Fraction(sm.ell, 2)))
            n_two += 1
            eps_exp += sm.ell + 1
        elif sm.kind == "one_dim_plus":
            shifts.append((Fraction(1, 2), Fraction(0)))
            n_one += 1
        else:
            shifts.append((Fraction(1, 2), Fraction(1, 2)))
            n_one += 1
            eps_exp += 1
    eps_exp %= 4
    if eps_exp == 0:
        epsilon = 1
    elif eps_exp == 2:
        epsilon = -1
    else:
        raise UnpairedFrequencyError(f"non-real epsilon i^{eps_exp} for {rep.name}")
    fed = FunctionalEquationData(
        rep_name=rep.name,
        two_exp=Fraction(n_two),
        pi_exp=Fraction(n_two) + Fraction(n_one, 2),
        gamma_shifts=tuple(sorted(shifts)),
        epsilon=epsilon,
    )
    return summands, fed
