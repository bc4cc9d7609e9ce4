"""Functional-equation consistency tests and false-positive probability bounds.

The test: Z(s, beta) must be independent of the test-function parameter beta.
Each check produces a difference linear form in the Dirichlet coefficients
plus an error budget delta; |difference| <= delta is the PASS condition, and
treating coefficients as bounded-density random variables turns |v_j| and
delta into an explicit false-positive probability.
"""

from __future__ import annotations

import dataclasses

import mpmath
from mpmath import mp

from . import tail
from .afe import LinearForm, TestFunction, get_evaluator
from .euler import CoefficientTable, Representation
from .fedata import FunctionalEquationData
from .precision import DEFAULT_CONTEXT, PrecisionContext


class SingularSystemError(ArithmeticError):
    pass


class ZeroCoefficientError(ArithmeticError):
    """The selected linear-form coefficient is numerically indistinguishable from 0."""


@dataclasses.dataclass
class ConsistencyReport:
    """One consistency equation Z(s, beta1) - Z(s, beta2) = 0.

    form holds the difference coefficients v_j = v^(1)_j - v^(2)_j;
    difference_value is sum over known n of v_j b_j; delta is the combined
    budget (tail bounds of both forms plus the unknown-coefficient sum of the
    difference form).  PASS means |difference_value| <= delta.
    """

    s: complex
    beta1: float
    beta2: float
    difference_value: complex
    form: LinearForm
    delta: float

    @property
    def passed(self) -> bool:
        return abs(complex(self.difference_value)) <= self.delta


def consistency(
    s,
    beta1: float,
    beta2: float,
    table: CoefficientTable,
    fe: FunctionalEquationData,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    rep: Representation | None = None,
) -> ConsistencyReport:
    rep = rep if rep is not None else table.rep
    TestFunction(beta1).validate_for(fe)
    TestFunction(beta2).validate_for(fe)
    beta_cap = max(3.0, abs(float(beta1)), abs(float(beta2)))
    ev = get_evaluator(fe, s, ctx, beta_max=beta_cap, n_max=max(20000, table.N))
    form1 = ev.linear_form(beta1, table.N)
    form2 = ev.linear_form(beta2, table.N)
    with ctx.workdps():
        v = [
            (a - b if isinstance(a, mpmath.mpc) or isinstance(b, mpmath.mpc) else a - b)
            for a, b in zip(form1.v, form2.v)
        ]
        diff_form = LinearForm(s=form1.s, beta=float(beta1), v=v)
        value = mp.mpc(0)
        value_tail = complex(0)
        for n in range(1, table.N + 1):
            if not table.known[n]:
                continue
            vn = v[n]
            if isinstance(vn, mpmath.mpc):
                value += vn * table.b[n]
            else:
                value_tail += vn * complex(table.b[n])
        value = value + mp.mpc(value_tail)
    d1 = tail.delta1_at(fe, s, TestFunction(beta1), rep, table.N, ctx) + tail.delta1_at(
        fe, s, TestFunction(beta2), rep, table.N, ctx
    )
    d2 = tail.delta2(diff_form, table, rep)
    delta = float(d1 + d2)
    diff_form.tail_delta = float(d1)
    return ConsistencyReport(
        s=complex(mpmath.mpmathify(s)),
        beta1=float(beta1),
        beta2=float(beta2),
        difference_value=value,
        form=diff_form,
        delta=delta,
    )


@dataclasses.dataclass(frozen=True)
class ProbabilityBound:
    """Both readings of the single-coefficient bound: the stated delta/|v_j|
    and the interval-length 2*delta/|v_j| (the headline number, matching the
    worked interval arithmetic)."""

    j: int
    half_width: float
    stated: float  # pdf_bound * delta / |v_j|
    interval_length: float  # pdf_bound * 2 * delta / |v_j|


def single_probability(
    report: ConsistencyReport,
    j: int,
    pdf_bound: float = 1.0,
    zero_tol: float = 1e-30,
) -> ProbabilityBound:
    """The PASS event confines b_j to an interval of half-width delta/|v_j|."""
    if pdf_bound < 0:
        raise ValueError("pdf_bound must be >= 0")
    vj = abs(complex(report.form.v[j]))
    if vj <= 10 * zero_tol:
        raise ZeroCoefficientError(f"|v_{j}| = {vj} too small to condition on")
    half = report.delta / vj
    return ProbabilityBound(
        j=j,
        half_width=half,
        stated=pdf_bound * half,
        interval_length=pdf_bound * 2 * half,
    )


@dataclasses.dataclass(frozen=True)
class SystemProbability:
    value: float
    determinant: float
    condition_number: float
    warning: str | None


def system_probability(
    reports: list[ConsistencyReport],
    js: list[int],
    pdf_bound: float = 1.0,
    condition_limit: float = 1e6,
) -> SystemProbability:
    """Volume bound pdf_bound^K 2^K |det A|^-1 prod delta_k for the K-equation
    system, A = (v_{k, j_k}); near-singular systems get an advisory warning
    (adding a dependent equation can absurdly "increase" the probability)."""
    K = len(reports)
    if K < 1 or len(js) != K:
        raise ValueError("need K >= 1 reports and K column indices")
    if len(set(js)) != K:
        raise ValueError("coefficient indices must be distinct")
    with mp.workdps(40):
        A = mp.matrix(K, K)
        for i, rep_i in enumerate(reports):
            for jx, j in enumerate(js):
                A[i, jx] = mp.re(mpmath.mpmathify(rep_i.form.v[j]))
        det = mp.det(A)
        norm = mp.mnorm(A, 1)
        if abs(det) < mp.mpf("1e-30") * max(1, norm) ** K:
            raise SingularSystemError("system matrix is singular to working precision")
        cond = float(norm * mp.mnorm(A**-1, 1))
        prod_delta = mp.mpf(1)
        for r in reports:
            prod_delta *= r.delta
        value = float(mp.mpf(pdf_bound) ** K * 2**K / abs(det) * prod_delta)
    warning = None
    if cond > condition_limit:
        warning = (
            f"system matrix condition number {cond:.3g} exceeds {condition_limit:.0e}; "
            "the volume bound may be uninformative"
        )
    return SystemProbability(
        value=value, determinant=float(det), condition_number=cond, warning=warning
    )
