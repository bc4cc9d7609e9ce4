"""Extended-precision primitives: precision context, log-gamma, vertical-line quadrature."""

from __future__ import annotations

import dataclasses

import mpmath
from mpmath import mp


class PoleOfGammaError(ValueError):
    """log_gamma was asked for a value at a non-positive integer."""


class QuadratureError(RuntimeError):
    """The line integral failed to converge within the evaluation budget."""


@dataclasses.dataclass(frozen=True)
class PrecisionContext:
    """Working precision and quadrature budget shared by all analytic operations.

    working_digits is the number of decimal digits carried by intermediate
    arithmetic; quad_tolerance is the absolute error target per line integral.
    """

    working_digits: int = 50
    quad_tolerance: float = 1e-40
    max_integrand_evals: int = 400_000

    def __post_init__(self):
        if self.working_digits < 30:
            raise ValueError("working_digits must be >= 30")
        if not self.quad_tolerance > 0:
            raise ValueError("quad_tolerance must be positive")
        if self.max_integrand_evals < 1:
            raise ValueError("max_integrand_evals must be positive")

    @property
    def dps(self) -> int:
        # guard digits absorb accumulation over long trapezoid sums
        return self.working_digits + 15

    def workdps(self):
        return mp.workdps(self.dps)

    def scaled(self, factor) -> "PrecisionContext":
        """Copy of this context with quad_tolerance scaled by ``factor`` (>= 1 typical)."""
        return dataclasses.replace(self, quad_tolerance=float(self.quad_tolerance) * float(factor))

    def with_tolerance(self, tol: float) -> "PrecisionContext":
        return dataclasses.replace(self, quad_tolerance=float(tol))


DEFAULT_CONTEXT = PrecisionContext()


def mpf_from_fraction(x):
    """Exact Fraction/int -> mpf at the current precision."""
    from fractions import Fraction

    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def log_gamma(z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Principal branch of log Gamma(z), absolute error below 10^(2-working_digits).

    Raises PoleOfGammaError at the poles z = 0, -1, -2, ...
    """
    with ctx.workdps():
        zz = mpmath.mpmathify(z)
        if mp.im(zz) == 0 and mp.re(zz) <= 0 and mp.isint(mp.re(zz)):
            raise PoleOfGammaError(f"log_gamma pole at z={z}")
        return mp.loggamma(zz)


def vertical_line_integral(f, nu, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(1/2*pi*i) * integral of f over the line Re(z) = nu, for integrands
    decaying at least exponentially in |Im z|.

    Uniform-step trapezoidal sums on z = nu + i*t; the line is truncated once
    50 consecutive samples fall below quad_tolerance/(10 * samples_so_far),
    and the step is halved until successive estimates differ by less than
    quad_tolerance/4.  Raises QuadratureError when max_integrand_evals is
    exhausted first.
    """
    with ctx.workdps():
        nu = mpmath.mpmathify(nu)
        tol = mp.mpf(ctx.quad_tolerance)
        evals = 0
        budget = ctx.max_integrand_evals

        def sample(t):
            nonlocal evals
            evals += 1
            if evals > budget:
                raise QuadratureError(
                    f"no convergence within {budget} integrand evaluations"
                )
            return mpmath.mpmathify(f(nu + 1j * t))

        def trapezoid(h):
            # march outward symmetrically until the decay criterion holds
            total = sample(mp.mpf(0))
            count = 1
            for direction in (1, -1):
                below = 0
                k = 1
                while True:
                    v = sample(direction * k * h)
                    total += v
                    count += 1
                    if abs(v) < tol / (10 * count):
                        below += 1
                        if below >= 50:
                            break
                    else:
                        below = 0
                    k += 1
            # dz = i*h, so (1/2*pi*i) * sum * dz = h * sum / (2*pi)
            return total * h / (2 * mp.pi)

        h = mp.mpf("0.5")
        prev = trapezoid(h)
        for _ in range(40):
            h /= 2
            cur = trapezoid(h)
            if abs(cur - prev) < tol / 4:
                return cur
            prev = cur
        raise QuadratureError("step-halving did not converge")
