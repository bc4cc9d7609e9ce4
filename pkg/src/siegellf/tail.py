"""Truncation control: tail bounds for the AFE sums and the unknown-coefficient budget.

delta1 bounds everything beyond the truncation point N; delta2 explicitly
accumulates |v_n| * (Ramanujan bound) over the unknown n <= N.  Per-term
bounds come from shifting the Gamma_R-product kernel integral to a line
Re w = c (evaluated sharply by quadrature) and, where it applies, from the
closed-form bound gstar_bound below; both are upper bounds, so the envelope
takes their minimum.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

import mpmath
from mpmath import mp

from .afe import LinearForm, TestFunction
from .euler import Representation, ramanujan_bound
from .fedata import FunctionalEquationData
from .precision import DEFAULT_CONTEXT, PrecisionContext, mpf_from_fraction


class InapplicableRegionError(ArithmeticError):
    """gstar_bound called with X < r; increase u or bound directly."""


class UnreachableTargetError(RuntimeError):
    pass


@dataclasses.dataclass(frozen=True)
class TailBudget:
    N: int
    delta1: float
    delta2: float

    @property
    def total(self) -> float:
        return self.delta1 + self.delta2


def gstar_bound(u, eta, mu, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Closed-form bound for |G*(u; eta, {mu_j})|, the tilted inverse Mellin
    transform of prod Gamma_R(s + mu_j) / s, valid for X >= r:

        (K r / X) e^(Re(mubar) u) e^(-X) prod_j (1 + r nu_j / X)^(nu_j)

    with delta = (pi/2)(1-|eta|), nu_j = (Re mu_j - 1)/2,
    mubar = 1/2 + (1 + sum mu_j)/r, X = pi r delta e^(-delta) e^(2u/r) and
    K = 2 sqrt((2^(r+1)/r) e^(delta(r-1))/delta) e^(-pi r eta Im(mubar)/4).
    """
    with ctx.workdps():
        u = mp.mpf(u)
        eta = mp.mpf(eta)
        if not abs(eta) < 1:
            raise ValueError("|eta| must be < 1")
        mus = [mpmath.mpmathify(mpf_from_fraction(m) if isinstance(m, (int, Fraction)) else m) for m in mu]
        r = len(mus)
        if r < 1:
            raise ValueError("mu must be nonempty")
        delta = mp.pi / 2 * (1 - abs(eta))
        X = mp.pi * r * delta * mp.exp(-delta) * mp.exp(2 * u / r)
        if X < r:
            raise InapplicableRegionError(f"X={float(X):.3f} < r={r}")
        mubar = mp.mpf(1) / 2 + (1 + mp.fsum(mus)) / r
        K = 2 * mp.sqrt((mp.mpf(2) ** (r + 1) / r) * mp.exp(delta * (r - 1)) / delta)
        K *= mp.exp(-mp.pi * r * eta * mp.im(mubar) / 4)
        prod = mp.mpf(1)
        for m in mus:
            nj = (mp.re(m) - 1) / 2
            prod *= (1 + r * nj / X) ** nj
        return (K * r / X) * mp.exp(mp.re(mubar) * u) * mp.exp(-X) * prod


def gstar_direct(u, eta, mu, ctx: PrecisionContext = DEFAULT_CONTEXT, nu=None):
    """G*(u; eta, {mu_j}) itself by direct quadrature (oracle for the bound)."""
    from .precision import vertical_line_integral

    with ctx.workdps():
        u = mp.mpf(u)
        eta = mp.mpf(eta)
        mus = [mpmath.mpmathify(mpf_from_fraction(m) if isinstance(m, (int, Fraction)) else m) for m in mu]
        r = len(mus)
        if nu is None:
            nu = max([mp.mpf("0.5")] + [mp.mpf("0.5") - mp.re(m) for m in mus])
        tilt = u + 1j * mp.pi * r * eta / 4

        def integrand(z):
            acc = mp.exp(tilt * (mp.mpf(1) / 2 - z)) / z
            for m in mus:
                w = z + m
                acc *= mp.pi ** (-w / 2) * mp.gamma(w / 2)
            return acc

        scale = abs(integrand(nu))
        return vertical_line_integral(integrand, nu, ctx.scaled(max(1, scale)))


def eta_for_beta(beta, degree: int) -> float:
    """Test-function tilt translated to the lemma's eta: beta = (pi/4) r eta."""
    return float(4 * mp.mpf(beta) / (mp.pi * degree))


def _abs_gamma_r_line(mus, c, t, pole):
    # |prod Gamma_R(c + it + mu_j)| / |c + it - pole|
    acc = mp.mpf(0)
    z = c + 1j * t
    for m in mus:
        w = (z + m) / 2
        acc += mp.re(mp.loggamma(w)) - mp.re(z + m) / 2 * mp.log(mp.pi)
    return mp.exp(acc) / abs(z - pole)


class KernelEnvelope:
    """Upper envelope E(n) >= |v_n| for one (descriptor, point, beta).

    Shifting the Gamma_R kernel integral to Re w = c gives
    |v_n| <= e^(-beta Im s) (n/Q~)^(-c) (I1(c) + I2(c)) Q~^(-Re s) / |H(s)|,
    where I1/I2 are the absolute line integrals with tilts e^(+-beta t) and
    poles at s and 1-s.  c is chosen from a grid; the closed-form gstar bound
    is folded in by minimum where its region applies.
    """

    C_GRID = (1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 11.0, 15.0, 20.0, 26.0, 33.0)

    def __init__(self, fe: FunctionalEquationData, s, g: TestFunction,
                 ctx: PrecisionContext = DEFAULT_CONTEXT):
        self.fe = fe
        self.ctx = ctx
        self.beta = float(g.beta)
        self.degree = fe.degree
        with mp.workdps(25):
            self.s = mpmath.mpmathify(s)
            self.mus = [mpf_from_fraction(m) for m in fe.gamma_r_shifts()]
            self.q_tilde = fe.reduced_conductor(ctx)
            # |H(s)| = prod |Gamma_R(s + mu_j)|
            acc = mp.mpf(0)
            for m in self.mus:
                w = (self.s + m) / 2
                acc += mp.re(mp.loggamma(w)) - mp.re(self.s + m) / 2 * mp.log(mp.pi)
            self.log_h_s = acc
            self.damp = mp.exp(-mp.mpf(self.beta) * mp.im(self.s))
            floor = max(mp.re(self.s), mp.re(1 - self.s)) + mp.mpf("0.25")
            self._table = []
            for c in self.C_GRID:
                c = mp.mpf(c)
                if c <= floor:
                    continue
                i1 = self._line_integral(c, +self.beta, self.s)
                i2 = self._line_integral(c, -self.beta, 1 - self.s)
                self._table.append((c, i1 + i2))

    def _line_integral(self, c, tilt, pole):
        # (1/2 pi) int e^(tilt t) |prod Gamma_R(c+it+mu)| / |c+it-pole| dt,
        # trapezoid with outward march; integrand positive and log-concave-ish
        h = mp.mpf("0.125")
        total = _abs_gamma_r_line(self.mus, c, mp.mpf(0), pole)
        peak = total
        for sign in (1, -1):
            j = 1
            while True:
                val = _abs_gamma_r_line(self.mus, c, sign * j * h, pole) * mp.exp(tilt * sign * j * h)
                total += val
                peak = max(peak, val)
                if val < peak * mp.mpf("1e-12") and j * h > 2:
                    break
                j += 1
                if j > 200000:
                    raise RuntimeError("tail line integral failed to decay")
        return total * h / (2 * mp.pi)

    def bound(self, n) -> mpmath.mpf:
        """min over the c-grid (and the closed form where applicable) of the
        per-term envelope at n."""
        with mp.workdps(25):
            n = mp.mpf(n)
            u = mp.log(n / self.q_tilde)
            best = mp.inf
            for c, itot in self._table:
                val = self.damp * mp.exp(-c * u) * itot
                best = min(best, val)
            best *= mp.exp(-self.log_h_s) * self.q_tilde ** (-mp.re(self.s))
            lemma = self.lemma_bound(n)
            if lemma is not None:
                best = min(best, lemma)
            return best

    def lemma_bound(self, n):
        """Per-term envelope assembled from gstar_bound (None when X < r or
        the tilt is out of range); kept as a cross-check and minimum branch."""
        with mp.workdps(25):
            r = len(self.mus)
            eta = eta_for_beta(self.beta, r)
            if not abs(eta) < 1:
                return None
            u = mp.log(mp.mpf(n) / self.q_tilde)
            try:
                g_plus = gstar_bound(u, eta, self.mus, self.ctx)
                g_minus = gstar_bound(u, -eta, self.mus, self.ctx)
            except InapplicableRegionError:
                return None
            delta = mp.pi / 2 * (1 - abs(mp.mpf(eta)))
            X = mp.pi * r * delta * mp.exp(-delta) * mp.exp(2 * u / r)
            sigma = X / r  # contour used inside the closed-form proof
            m1 = 1 + abs(self.s) / abs(2 * sigma - mp.re(self.s))
            m2 = 1 + abs(1 - self.s) / abs(2 * sigma - mp.re(1 - self.s))
            kernel = mp.mpf(n) ** mp.mpf("-0.5") * (g_plus * m1 + g_minus * m2)
            return self.damp * kernel * mp.exp(-self.log_h_s) * self.q_tilde ** (-mp.re(self.s))

    def tail_sum_bound(self, N: int, rep: Representation):
        """Bound for sum_{n>N} ramanujan_bound(n) * |v_n|."""
        with mp.workdps(25):
            d = rep.dimension
            best = mp.inf
            for x0 in (mp.mpf(2), mp.mpf(3)):
                zeta_pow = mp.zeta(x0) ** d
                for c, itot in self._table:
                    if c <= x0 + mp.mpf("0.25"):
                        continue
                    # sum_{n>N} ram(n) (n/Q~)^(-c) <= Q~^c N^(x0-c) zeta(x0)^d
                    val = (
                        self.damp
                        * itot
                        * self.q_tilde**c
                        * mp.mpf(N) ** (x0 - c)
                        * zeta_pow
                    )
                    best = min(best, val)
            return best * mp.exp(-self.log_h_s) * self.q_tilde ** (-mp.re(self.s))


_ENVELOPES: dict[tuple, KernelEnvelope] = {}


def get_envelope(fe: FunctionalEquationData, s, g: TestFunction,
                 ctx: PrecisionContext = DEFAULT_CONTEXT) -> KernelEnvelope:
    with mp.workdps(25):
        key = (fe.serialize(), mp.nstr(mpmath.mpmathify(s), 20), float(g.beta))
    if key not in _ENVELOPES:
        _ENVELOPES[key] = KernelEnvelope(fe, s, g, ctx)
    return _ENVELOPES[key]


TRUNCATION_GRID = (
    100, 200, 500, 1000, 2000, 5000, 10000, 20000, 50000, 100000,
    200000, 500000, 1000000,
)


def delta1_at(fe: FunctionalEquationData, s, g: TestFunction, rep: Representation,
              N: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> float:
    env = get_envelope(fe, s, g, ctx)
    return float(env.tail_sum_bound(N, rep))


def choose_truncation(fe: FunctionalEquationData, s, g: TestFunction, target_delta1: float,
                      rep: Representation, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Smallest N on the coarse grid whose certified tail bound meets the target."""
    env = get_envelope(fe, s, g, ctx)
    for N in TRUNCATION_GRID:
        d1 = env.tail_sum_bound(N, rep)
        if d1 <= mp.mpf(target_delta1):
            return N, float(d1)
    raise UnreachableTargetError(
        f"tail bound cannot reach delta1 <= {target_delta1} within the grid"
    )


def delta2(form: LinearForm, table, rep: Representation) -> float:
    """sum over unknown n <= N of |v_n| * ramanujan_bound(n)."""
    if form.N > table.N:
        raise ValueError("form and table disagree on N")
    acc_mp = mp.mpf(0)
    acc_float = 0.0
    for n in range(1, form.N + 1):
        if table.known[n]:
            continue
        vn = form.v[n]
        if isinstance(vn, (complex, float)):
            acc_float += abs(vn) * ramanujan_bound(n, rep)
        else:
            acc_mp += abs(vn) * ramanujan_bound(n, rep)
    return float(acc_mp + acc_float)


def budget_for(form: LinearForm, table, fe: FunctionalEquationData, g: TestFunction,
               rep: Representation, ctx: PrecisionContext = DEFAULT_CONTEXT) -> TailBudget:
    d1 = delta1_at(fe, form.s, g, rep, form.N, ctx)
    d2 = delta2(form, table, rep)
    return TailBudget(N=form.N, delta1=d1, delta2=d2)
