"""Smoothed approximate-functional-equation evaluation of completed L-values.

Values are computed as linear forms in the Dirichlet coefficients: the n-th
term of each sum is a vertical-line integral of a gamma product against
(Q/n)^z, so one set of contour samples per (descriptor, point) serves every
(n, beta) through a geometric factor.  Leading terms run at full working
precision; the long tail (which only carries sub-1e-12 contributions and
error-budget magnitudes) runs vectorized in double precision against
pre-scaled samples.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp

from .euler import CoefficientTable
from .fedata import FunctionalEquationData
from .precision import (
    DEFAULT_CONTEXT,
    PrecisionContext,
    mpf_from_fraction,
    vertical_line_integral,
)


class ContourTooLowError(ValueError):
    """nu does not clear max(0, -Re(lambda_j/kappa_j + s))."""


class TestFunctionRangeError(ValueError):
    """|beta| >= (pi/4) * sum(kappa_j) for the descriptor in use."""


@dataclasses.dataclass(frozen=True)
class TestFunction:
    """The exponential test function g(s) = exp(-i*beta*s)."""

    beta: float

    def validate_for(self, fe: FunctionalEquationData):
        limit = float(mp.pi) / 4 * float(sum(k for k, _ in fe.gamma_shifts))
        if not abs(float(self.beta)) < limit:
            raise TestFunctionRangeError(
                f"|beta|={abs(float(self.beta))} must be < (pi/4)*sum(kappa) = {limit}"
            )
        return self

    def __call__(self, w):
        return mp.exp(-1j * mp.mpf(self.beta) * w)


@dataclasses.dataclass
class LinearForm:
    """A value expressed as sum_n v_n b_n (real-coefficient convention: the
    dual-sum part multiplies conj(b_n); for the real datasets handled here the
    two collapse into one array).  Leading entries are mpmath numbers, tail
    entries may be machine complex."""

    s: complex
    beta: float
    v: list  # v[0] unused, v[n] for 1 <= n <= N
    tail_delta: float = 0.0

    @property
    def N(self) -> int:
        return len(self.v) - 1

    def coefficient(self, n: int):
        return self.v[n]


def _grid_quarter_up(x):
    return mp.ceil(4 * x) / mp.mpf(4)


def default_contour(fe: FunctionalEquationData, s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """nu = 1 + max(0, -min Re(lambda_j/kappa_j + s)), rounded up to quarters."""
    with ctx.workdps():
        s = mpmath.mpmathify(s)
        low = max(
            [mp.mpf(0)]
            + [
                -mp.re(mpf_from_fraction(lam) / mpf_from_fraction(kap) + s)
                for kap, lam in fe.gamma_shifts
            ]
        )
        return _grid_quarter_up(1 + low)


def _min_contour(fe, s):
    s = mpmath.mpmathify(s)
    vals = [mp.mpf(0)] + [
        -mp.re(mpf_from_fraction(lam) / mpf_from_fraction(kap) + s) for kap, lam in fe.gamma_shifts
    ]
    return max(vals)


def f1(s, n: int, fe: FunctionalEquationData, g: TestFunction, nu=None,
       ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(1/2 pi i) * int over Re z = nu of prod_j Gamma(kappa_j(z+s)+lambda_j)
    * g(s+z) * (Q/n)^z * dz/z, by direct step-controlled quadrature."""
    g.validate_for(fe)
    with ctx.workdps():
        s = mpmath.mpmathify(s)
        if nu is None:
            nu = default_contour(fe, s, ctx)
        nu = mpmath.mpmathify(nu)
        if not mp.re(nu) > _min_contour(fe, s):
            raise ContourTooLowError(f"nu={nu} is at or below the allowed minimum")
        Q = fe.q_value(ctx)
        kl = [(mpf_from_fraction(k), mpf_from_fraction(l)) for k, l in fe.gamma_shifts]
        x = Q / n

        def integrand(z):
            acc = mp.mpc(0)
            for kap, lam in kl:
                acc += mp.loggamma(kap * (z + s) + lam)
            return mp.exp(acc + z * mp.log(x)) * g(s + z) / z

        scale = abs(integrand(nu))
        return vertical_line_integral(integrand, nu, ctx.scaled(max(1, scale)))


def f2(one_minus_s, n: int, fe: FunctionalEquationData, g: TestFunction, nu=None,
       ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Dual-sum kernel: conjugated shifts and g(s - z), evaluated at 1-s."""
    g.validate_for(fe)
    with ctx.workdps():
        w = mpmath.mpmathify(one_minus_s)
        s = 1 - w
        if nu is None:
            nu = default_contour(fe, w, ctx)
        nu = mpmath.mpmathify(nu)
        if not mp.re(nu) > _min_contour(fe, w):
            raise ContourTooLowError(f"nu={nu} is at or below the allowed minimum")
        Q = fe.q_value(ctx)
        # lambda_j real for every built-in descriptor; conjugation kept explicit
        kl = [(mpf_from_fraction(k), mpf_from_fraction(l)) for k, l in fe.gamma_shifts]
        x = Q / n

        def integrand(z):
            acc = mp.mpc(0)
            for kap, lam in kl:
                acc += mp.loggamma(kap * (z + w) + mp.conj(lam))
            return mp.exp(acc + z * mp.log(x)) * g(s - z) / z

        scale = abs(integrand(nu))
        return vertical_line_integral(integrand, nu, ctx.scaled(max(1, scale)))


def hardy_phase(fe: FunctionalEquationData, s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """omega(s) = epsilon^(-1/2) * gamma(s)/|gamma(s)| with
    gamma(s) = Q^s prod Gamma(kappa_j s + lambda_j); makes Z real on the
    critical line."""
    with ctx.workdps():
        s = mpmath.mpmathify(s)
        log_gamma_s = s * mp.log(fe.q_value(ctx)) + fe.log_gamma_product(s, ctx)
        return mp.exp(1j * mp.im(log_gamma_s)) / mp.sqrt(mp.mpc(fe.epsilon))


class _ContourSamples:
    """Trapezoid samples of the n-independent integrand factor on one line."""

    def __init__(self, nu, h, weights):
        self.nu = nu
        self.h = h
        self.weights = weights  # (value at t=0, samples for t>0, samples for t<0)

    def conjugate_reflection(self):
        """Samples of conj(W(-t)): the dual line when 1-s = conj(s)."""
        w0, pos, neg = self.weights
        return _ContourSamples(
            self.nu,
            self.h,
            (mp.conj(w0), [mp.conj(w) for w in neg], [mp.conj(w) for w in pos]),
        )

    def geometric_sum(self, rho):
        w0, pos, neg = self.weights
        acc = mp.mpc(0)
        for w in reversed(pos):
            acc = (acc + w) * rho
        total = acc + w0
        acc = mp.mpc(0)
        inv = 1 / rho
        for w in reversed(neg):
            acc = (acc + w) * inv
        return total + acc

    def geometric_sum_stride2(self, rho):
        # trapezoid at double step, for step-size verification
        w0, pos, neg = self.weights
        rho2 = rho * rho
        acc = mp.mpc(0)
        for w in reversed(pos[1::2]):
            acc = (acc + w) * rho2
        total = acc + w0
        acc = mp.mpc(0)
        inv2 = 1 / rho2
        for w in reversed(neg[1::2]):
            acc = (acc + w) * inv2
        return (total + acc) * 2


class _VectorLine:
    """Machine-precision copy of a contour line, rescaled so max |W| = 1.

    log_scale is the mpf log of the removed factor; j runs over sample
    offsets so W[k] approximates W(nu + i*j[k]*h) * exp(-log_scale).
    """

    def __init__(self, samples: _ContourSamples):
        self.nu = samples.nu
        self.h = samples.h
        w0, pos, neg = samples.weights
        peak_log = mp.log(max(abs(w0), max(abs(w) for w in pos), max(abs(w) for w in neg)))
        self.log_scale = peak_log
        js = list(range(-len(neg), 0)) + [0] + list(range(1, len(pos) + 1))
        vals = list(reversed(neg)) + [w0] + list(pos)
        scaled = [mp.exp(mp.log(v) - peak_log) if v != 0 else mp.mpc(0) for v in vals]
        self.j = np.array(js, dtype=np.float64)
        self.w = np.array([complex(v) for v in scaled], dtype=np.complex128)


class AfeEvaluator:
    """Caches contour data for one (descriptor, point) and evaluates the AFE
    sums for any |beta| <= beta_max and n <= n_max."""

    def __init__(
        self,
        fe: FunctionalEquationData,
        s,
        ctx: PrecisionContext = DEFAULT_CONTEXT,
        beta_max: float = 3.0,
        n_full: int = 150,
        n_max: int = 20000,
    ):
        self.fe = fe
        self.ctx = ctx
        limit = float(mp.pi) / 4 * float(sum(k for k, _ in fe.gamma_shifts))
        self.beta_max = min(float(beta_max), 0.98 * limit)
        self.n_full = n_full
        self.n_max = n_max
        with ctx.workdps():
            self.s = mpmath.mpmathify(s)
            self.Q = fe.q_value(ctx)
            self.epsilon = fe.epsilon
            self.nu1 = default_contour(fe, self.s, ctx)
            self.nu2 = default_contour(fe, 1 - self.s, ctx)
            self._critical = mp.re(self.s) == mp.mpf("0.5")
            self._real_shifts = all(
                isinstance(lam, (int, Fraction)) or complex(lam).imag == 0
                for _, lam in fe.gamma_shifts
            )
        self._full = None
        self._vector = None

    # -- contour construction -------------------------------------------------

    def _build_line(self, point, nu, rel_tol, n_hi):
        """Sample prod Gamma(kappa(z+point)+lambda)/z on Re z = nu."""
        point = mpmath.mpmathify(point)
        nu = mpmath.mpmathify(nu)
        kl = [(mpf_from_fraction(k), mpf_from_fraction(l)) for k, l in self.fe.gamma_shifts]
        rel_tol = mp.mpf(rel_tol)

        def w_at(t):
            z = nu + 1j * t
            acc = mp.mpc(0)
            for kap, lam in kl:
                acc += mp.loggamma(kap * (z + point) + lam)
            return mp.exp(acc) / z

        # strip half-width: distance to z=0 and to the nearest Gamma pole
        d = mp.re(nu)
        for kap, lam in kl:
            d = min(d, mp.re(nu) + mp.re(point + lam / kap))
        d *= mp.mpf("0.8")
        omega_max = abs(mp.log(self.Q / n_hi)) + self.beta_max
        h = 2 * mp.pi * d / (d * omega_max + mp.log(1 / rel_tol) + 10)

        peak = abs(w_at(mp.mpf(0)))

        def march(sign):
            nonlocal peak
            out = []
            j = 1
            below = 0
            while True:
                w = w_at(sign * j * h)
                out.append(w)
                mag = abs(w)
                if mag > peak:  # gamma products with large shifts crest off axis
                    peak = mag
                    below = 0
                elif mag * mp.exp(self.beta_max * j * h) < peak * rel_tol / 1000:
                    below += 1
                    if below >= 8:
                        break
                else:
                    below = 0
                j += 1
                if j > 500000:
                    raise RuntimeError("contour sampling failed to decay")
            return out

        return _ContourSamples(nu, h, (w_at(mp.mpf(0)), march(1), march(-1)))

    @property
    def _dual_is_mirror(self) -> bool:
        return self._critical and self._real_shifts and self.nu2 == self.nu1

    def _full_tier(self):
        if self._full is None:
            rel = mp.mpf(10) ** (-(self.ctx.working_digits + 6))
            with mp.workdps(self.ctx.dps):
                line1 = self._build_line(self.s, self.nu1, rel, self.n_max)
                if self._dual_is_mirror:
                    line2 = line1.conjugate_reflection()
                else:
                    line2 = self._build_line(1 - self.s, self.nu2, rel, self.n_max)
            self._full = (self.ctx.dps, line1, line2)
        return self._full

    def _vector_tier(self):
        if self._vector is None:
            with mp.workdps(30):
                rel = mp.mpf("1e-17")
                line1 = self._build_line(self.s, self.nu1, rel, self.n_max)
                if self._dual_is_mirror:
                    line2 = None  # handled by conjugation identity
                else:
                    line2 = _VectorLine(self._build_line(1 - self.s, self.nu2, rel, self.n_max))
                vec1 = _VectorLine(line1)
            self._vector = (vec1, line2)
        return self._vector

    # -- kernel evaluation ------------------------------------------------------

    def f1_value(self, n: int, beta) -> mpmath.mpc:
        dps, line1, _ = self._full_tier()
        with mp.workdps(dps):
            beta = mp.mpf(beta)
            ln_qn = mp.log(self.Q / n)
            rho = mp.exp(line1.h * (beta + 1j * ln_qn))
            pref = mp.exp(-1j * beta * (self.s + line1.nu) + line1.nu * ln_qn)
            return pref * line1.geometric_sum(rho) * line1.h / (2 * mp.pi)

    def f2_value(self, n: int, beta) -> mpmath.mpc:
        dps, _, line2 = self._full_tier()
        if self._dual_is_mirror:
            with mp.workdps(dps):
                return mp.exp(-1j * mp.mpf(beta)) * mp.conj(self.f1_value(n, beta))
        with mp.workdps(dps):
            beta = mp.mpf(beta)
            ln_qn = mp.log(self.Q / n)
            rho = mp.exp(line2.h * (-beta + 1j * ln_qn))
            pref = mp.exp(-1j * beta * (self.s - line2.nu) + line2.nu * ln_qn)
            return pref * line2.geometric_sum(rho) * line2.h / (2 * mp.pi)

    def verify_step(self, beta=0):
        """Stride-2 self-check of the trapezoid step (full tier)."""
        dps, line1, line2 = self._full_tier()
        report = {}
        with mp.workdps(dps):
            for tag, line, bsign in (("f1", line1, beta), ("f2", line2, -beta)):
                rho = mp.exp(line.h * (mp.mpf(bsign) + 1j * mp.log(self.Q / self.n_max)))
                full = line.geometric_sum(rho)
                half = line.geometric_sum_stride2(rho)
                peak = max(abs(line.weights[0]), max(abs(w) for w in line.weights[1]))
                report[tag] = float(abs(full - half) / peak)
        return report

    # -- assembled quantities -----------------------------------------------------

    def term(self, n: int, beta):
        """Coefficient of b_n inside Upsilon: Q^s n^-s f1 + eps Q^(1-s) n^-(1-s) f2."""
        dps, line1, line2 = self._full_tier()
        with mp.workdps(dps):
            beta = mp.mpf(beta)
            ln_qn = mp.log(self.Q / n)
            two_pi = 2 * mp.pi
            rho1 = mp.exp(line1.h * (beta + 1j * ln_qn))
            f1v = (
                mp.exp(-1j * beta * (self.s + line1.nu) + line1.nu * ln_qn)
                * line1.geometric_sum(rho1)
                * line1.h
                / two_pi
            )
            if self._dual_is_mirror:
                f2v = mp.exp(-1j * beta) * mp.conj(f1v)
            else:
                rho2 = mp.exp(line2.h * (-beta + 1j * ln_qn))
                f2v = (
                    mp.exp(-1j * beta * (self.s - line2.nu) + line2.nu * ln_qn)
                    * line2.geometric_sum(rho2)
                    * line2.h
                    / two_pi
                )
            t1 = mp.exp(self.s * ln_qn) * f1v  # Q^s n^-s = e^{s ln(Q/n)}
            t2 = self.epsilon * mp.exp((1 - self.s) * ln_qn) * f2v
            return t1 + t2

    def _terms_vectorized(self, ns: np.ndarray, beta: float):
        """Upsilon-term values for an array of n, scaled by exp(-log_scale).

        Returns (values: complex128 array, log_scale: mpf); the true terms are
        values * exp(log_scale).  Double precision: absolute accuracy is about
        1e-15 relative to the largest term of the sums.
        """
        vec1, vec2 = self._vector_tier()
        with mp.workdps(30):
            log_scale = vec1.log_scale
            s = complex(self.s)
            qf = float(self.Q)
            eps = self.epsilon
            h1 = float(vec1.h)
            nu1 = float(vec1.nu)
        ln_qn = np.log(qf / ns.astype(np.float64))
        c1 = h1 * (beta + 1j * ln_qn)
        # S1[n] = sum_k w[k] * exp(j[k] * c1[n]); chunk to bound memory
        out = np.empty(len(ns), dtype=np.complex128)
        chunk = 2048
        for lo in range(0, len(ns), chunk):
            hi = min(lo + chunk, len(ns))
            E = np.exp(np.outer(vec1.j, c1[lo:hi]))
            out[lo:hi] = vec1.w @ E
        f1v = np.exp(-1j * beta * (s + nu1) + nu1 * ln_qn) * out * (h1 / (2 * np.pi))
        if self._dual_is_mirror:
            f2v = np.exp(-1j * beta) * np.conj(f1v)
            scale2_adjust = 1.0
        else:
            with mp.workdps(30):
                h2 = float(vec2.h)
                nu2 = float(vec2.nu)
                scale2_adjust = complex(mp.exp(vec2.log_scale - vec1.log_scale))
            c2 = h2 * (-beta + 1j * ln_qn)
            out2 = np.empty(len(ns), dtype=np.complex128)
            for lo in range(0, len(ns), chunk):
                hi = min(lo + chunk, len(ns))
                E = np.exp(np.outer(vec2.j, c2[lo:hi]))
                out2[lo:hi] = vec2.w @ E
            f2v = (
                np.exp(-1j * beta * (s - nu2) + nu2 * ln_qn)
                * out2
                * (h2 / (2 * np.pi))
                * scale2_adjust
            )
        t1 = np.exp(s * ln_qn) * f1v
        t2 = eps * np.exp((1 - s) * ln_qn) * f2v
        return t1 + t2, log_scale

    def normalization(self, beta):
        """omega(s) / (gamma(s) g(s)): maps Upsilon-terms to Hardy-normalized ones."""
        with self.ctx.workdps():
            s = self.s
            log_gamma_s = s * mp.log(self.Q) + self.fe.log_gamma_product(s, self.ctx)
            omega = mp.exp(1j * mp.im(log_gamma_s)) / mp.sqrt(mp.mpc(self.epsilon))
            ginv = mp.exp(1j * mp.mpf(beta) * s)
            return omega * mp.exp(-log_gamma_s) * ginv

    def linear_form(self, beta, N: int) -> LinearForm:
        """v_n for 1 <= n <= N: mpmath values up to n_full, machine complex above."""
        TestFunction(beta).validate_for(self.fe)
        if N > self.n_max:
            raise ValueError(f"N={N} exceeds evaluator n_max={self.n_max}")
        with self.ctx.workdps():
            norm = self.normalization(beta)
            v = [mp.mpc(0)] * (min(N, self.n_full) + 1)
            for n in range(1, len(v)):
                v[n] = norm * self.term(n, beta)
        if N > self.n_full:
            ns = np.arange(self.n_full + 1, N + 1)
            vals, log_scale = self._terms_vectorized(ns, float(beta))
            with self.ctx.workdps():
                c = complex(norm * mp.exp(log_scale))
            v = v + list(c * vals)
        return LinearForm(s=self.s, beta=float(beta), v=v)

    def z_from_table(self, table: CoefficientTable, beta):
        """Hardy-normalized value over the known coefficients: sum v_n b_n."""
        form = self.linear_form(beta, table.N)
        return self.pair_with_table(form, table)

    def pair_with_table(self, form: LinearForm, table: CoefficientTable):
        with self.ctx.workdps():
            acc = mp.mpc(0)
            tail = complex(0)
            for n in range(1, form.N + 1):
                if not table.known[n]:
                    continue
                vn = form.v[n]
                if isinstance(vn, mpmath.mpc):
                    acc += vn * table.b[n]
                else:
                    tail += vn * complex(table.b[n])
            return acc + mp.mpc(tail)

    def lambda_from_table(self, table: CoefficientTable, beta):
        """Completed-value estimate Lambda(s) over the known coefficients."""
        TestFunction(beta).validate_for(self.fe)
        with self.ctx.workdps():
            acc1 = mp.mpc(0)
            acc2 = mp.mpc(0)
            cap = min(table.N, self.n_max)
            for n in range(1, cap + 1):
                if not table.known[n]:
                    continue
                acc1 += table.b[n] * self.Q**self.s * mp.mpf(n) ** (-self.s) * self.f1_value(n, beta)
                acc2 += (
                    mp.conj(table.b[n])
                    * self.Q ** (1 - self.s)
                    * mp.mpf(n) ** (self.s - 1)
                    * self.f2_value(n, beta)
                )
            g_at_s = mp.exp(-1j * mp.mpf(beta) * self.s)
            return (acc1 + self.epsilon * acc2) / g_at_s


_EVALUATORS: dict[tuple, AfeEvaluator] = {}


def get_evaluator(
    fe: FunctionalEquationData,
    s,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    beta_max: float = 3.0,
    n_full: int = 150,
    n_max: int = 20000,
) -> AfeEvaluator:
    with ctx.workdps():
        key = (
            fe.serialize(),
            mp.nstr(mpmath.mpmathify(s), ctx.working_digits),
            ctx.working_digits,
            float(ctx.quad_tolerance),
            float(beta_max),
            n_full,
            n_max,
        )
    if key not in _EVALUATORS:
        _EVALUATORS[key] = AfeEvaluator(fe, s, ctx, beta_max, n_full, n_max)
    return _EVALUATORS[key]


def lambda_value(s, table: CoefficientTable, fe: FunctionalEquationData, g: TestFunction,
                 ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Lambda(s) estimate from the known coefficients (entire case: no pole sum).

    Exact-formula path (per-n mpmath kernels); prefer z_value for bulk work.
    """
    ev = get_evaluator(fe, s, ctx, beta_max=max(3.0, abs(float(g.beta))), n_max=max(20000, table.N))
    return ev.lambda_from_table(table, g.beta)


def z_value(s, table: CoefficientTable, fe: FunctionalEquationData, g: TestFunction,
            ctx: PrecisionContext = DEFAULT_CONTEXT, rep=None):
    """Hardy-normalized Z(s, beta) together with the total error budget
    delta1 + delta2 from the truncation module."""
    from . import tail  # late import: tail consumes LinearForm

    rep = rep if rep is not None else table.rep
    ev = get_evaluator(fe, s, ctx, beta_max=max(3.0, abs(float(g.beta))), n_max=max(20000, table.N))
    value = ev.z_from_table(table, g.beta)
    form = ev.linear_form(g.beta, table.N)
    budget = tail.budget_for(form, table, fe, TestFunction(g.beta), rep, ctx)
    return value, budget.total


def linear_form(s, fe: FunctionalEquationData, g: TestFunction, mask_info: tuple[int, int],
                ctx: PrecisionContext = DEFAULT_CONTEXT) -> LinearForm:
    """v_n for n = 1..N; v_1 reproduces the constant term since b_1 = 1."""
    _, N = mask_info
    ev = get_evaluator(fe, s, ctx, beta_max=max(3.0, abs(float(g.beta))), n_max=max(20000, N))
    return ev.linear_form(g.beta, N)
