"""Completed-L descriptors: hard-coded tables vs the archimedean derivation."""

from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from siegellf.euler import REPRESENTATIONS
from siegellf.fedata import (
    FunctionalEquationData,
    UnsupportedRepresentationError,
    WeilSummand,
    archimedean_frequencies,
    builtin_fe,
    derive_archimedean,
)

ALL_REPS = ("spin", "stan", "adj", "rho14", "rho16")


def test_spin_descriptor_at_weight_20():
    fe = builtin_fe("spin", 20)
    assert fe.sorted_shifts() == ((Fraction(1), Fraction(1, 2)), (Fraction(1), Fraction(37, 2)))
    assert (fe.two_exp, fe.pi_exp) == (2, 2)  # Q = 1/(4 pi^2)
    assert fe.epsilon == 1  # (-1)^k with k even
    assert fe.degree == 4


def test_adj_descriptor_shifts():
    k = 20
    fe = builtin_fe("adj", k)
    want = sorted(
        [
            (Fraction(1, 2), Fraction(1, 2)),
            (Fraction(1, 2), Fraction(1, 2)),
            (Fraction(1), Fraction(1)),
            (Fraction(1), Fraction(k - 2)),
            (Fraction(1), Fraction(k - 1)),
            (Fraction(1), Fraction(2 * k - 3)),
        ]
    )
    assert list(fe.sorted_shifts()) == want
    assert fe.degree == 10


def test_rho16_sign():
    assert builtin_fe("rho16", 20).epsilon == -1
    assert builtin_fe("rho16", 12).epsilon == -1


def test_epsilon_table():
    for name, eps in (("spin", 1), ("stan", 1), ("adj", 1), ("rho14", 1), ("rho16", -1)):
        assert builtin_fe(name, 16).epsilon == eps


def test_degree_matches_dimension():
    for name in ALL_REPS:
        for k in (10, 12, 16, 20):
            assert builtin_fe(name, k).degree == REPRESENTATIONS[name].dimension


def test_unsupported_rep():
    with pytest.raises(UnsupportedRepresentationError):
        builtin_fe("sym3", 20)


def test_builtin_fe_weight_validation():
    with pytest.raises(ValueError):
        builtin_fe("adj", 9)
    with pytest.raises(ValueError):
        builtin_fe("adj", 15)


def test_spin_summands():
    for k in (10, 16, 20):
        summands, fed = derive_archimedean("spin", k)
        kinds = sorted((s.kind, s.ell) for s in summands)
        assert kinds == [("two_dim", 1), ("two_dim", 2 * k - 3)]
        assert fed.sorted_shifts() == (
            (Fraction(1), Fraction(1, 2)),
            (Fraction(1), Fraction(2 * k - 3, 2)),
        )


def test_adj_frequency_multiset():
    k = 20
    freqs = sorted(archimedean_frequencies(REPRESENTATIONS["adj"], k))
    want = sorted([0, 0, 2, -2, 2 * k - 4, 4 - 2 * k, 2 * k - 2, 2 - 2 * k, 4 * k - 6, 6 - 4 * k])
    assert freqs == want


def test_frequencies_sum_to_zero():
    for name in ALL_REPS:
        for k in (10, 12, 16, 20):
            assert sum(archimedean_frequencies(REPRESENTATIONS[name], k)) == 0


def test_derived_epsilon_values():
    for k in (10, 12, 16, 20):
        assert derive_archimedean("spin", k)[1].epsilon == (-1) ** k
        assert derive_archimedean("stan", k)[1].epsilon == 1
        assert derive_archimedean("adj", k)[1].epsilon == 1
    # odd weight flips the spin sign
    assert derive_archimedean("spin", 11)[1].epsilon == -1


def test_derivation_agrees_with_builtin_tables():
    for name in ALL_REPS:
        for k in (10, 12, 16, 20):
            built = builtin_fe(name, k)
            _, derived = derive_archimedean(name, k)
            assert built.sorted_shifts() == derived.sorted_shifts(), (name, k)
            assert (built.two_exp, built.pi_exp) == (derived.two_exp, derived.pi_exp)
            assert built.epsilon == derived.epsilon


def test_reduced_conductor_is_one():
    # level-1 forms: the Gamma_R-normalized conductor collapses to 1
    for name in ALL_REPS:
        fe = builtin_fe(name, 20)
        with mp.workdps(40):
            assert abs(fe.reduced_conductor() - 1) < mp.mpf("1e-30")


def test_gamma_r_shift_count_is_degree():
    for name in ALL_REPS:
        fe = builtin_fe(name, 20)
        assert len(fe.gamma_r_shifts()) == fe.degree


def test_serialization_shape():
    fe = builtin_fe("stan", 20)
    text = fe.serialize()
    parts = text.split()
    assert parts[0].startswith("2^-")
    assert parts[-1] in ("+1", "-1")
    assert (len(parts) - 2) % 2 == 0


def test_weil_summand_validation():
    with pytest.raises(ValueError):
        WeilSummand("two_dim", ell=0)
    with pytest.raises(ValueError):
        WeilSummand("three_dim")


def test_descriptor_invariants():
    with pytest.raises(ValueError):
        FunctionalEquationData("x", Fraction(1), Fraction(1), ((Fraction(1), Fraction(-1)),), 1)
    with pytest.raises(ValueError):
        FunctionalEquationData("x", Fraction(1), Fraction(1), ((Fraction(1), Fraction(1)),), 2)
