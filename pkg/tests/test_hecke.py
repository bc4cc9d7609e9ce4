"""Eigenvalue file parsing and the bundled dataset."""

import pytest

from siegellf.hecke import (
    DataFormatError,
    HeckeEigenvalues,
    MissingPrimeError,
    WeightMismatchError,
    builtin_dataset_path,
    load_eigenvalues,
    primes_up_to,
)

GOOD = """# weight=20 prime_bound=3
# a comment line
2 -840960 248256200704
3 -246480768 -216652519024128
"""


def test_round_trip(tmp_path):
    path = tmp_path / "ev.txt"
    path.write_text(GOOD, encoding="ascii")
    data = load_eigenvalues(path, expected_weight=20)
    assert data.weight == 20
    assert data.prime_bound == 3
    assert data.rows[2] == (-840960, 248256200704)
    assert data.rows[3] == (-246480768, -216652519024128)
    path2 = tmp_path / "ev2.txt"
    path2.write_text(data.serialize(), encoding="ascii")
    data2 = load_eigenvalues(path2)
    assert data2 == data


def test_missing_prime(tmp_path):
    path = tmp_path / "ev.txt"
    path.write_text("# weight=20 prime_bound=3\n2 1 1\n", encoding="ascii")
    with pytest.raises(MissingPrimeError):
        load_eigenvalues(path)


def test_weight_mismatch(tmp_path):
    path = tmp_path / "ev.txt"
    path.write_text(GOOD, encoding="ascii")
    with pytest.raises(WeightMismatchError):
        load_eigenvalues(path, expected_weight=22)


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "ev.txt"
    path.write_text("# weight=20 prime_bound=3\n2 -840960\n", encoding="ascii")
    with pytest.raises(DataFormatError) as err:
        load_eigenvalues(path)
    assert err.value.line == 2


def test_non_numeric_entry(tmp_path):
    path = tmp_path / "ev.txt"
    path.write_text("# weight=20 prime_bound=2\n2 abc 1\n", encoding="ascii")
    with pytest.raises(DataFormatError):
        load_eigenvalues(path)


def test_missing_header(tmp_path):
    path = tmp_path / "ev.txt"
    path.write_text("2 1 1\n", encoding="ascii")
    with pytest.raises(DataFormatError):
        load_eigenvalues(path)


def test_duplicate_prime(tmp_path):
    path = tmp_path / "ev.txt"
    path.write_text("# weight=20 prime_bound=2\n2 1 1\n2 1 1\n", encoding="ascii")
    with pytest.raises(DataFormatError):
        load_eigenvalues(path)


def test_rational_entries(tmp_path):
    from fractions import Fraction

    path = tmp_path / "ev.txt"
    path.write_text("# weight=20 prime_bound=2\n2 -1/2 5/3\n", encoding="ascii")
    data = load_eigenvalues(path)
    assert data.rows[2] == (Fraction(-1, 2), Fraction(5, 3))


def test_weight_validation():
    with pytest.raises(ValueError):
        HeckeEigenvalues(weight=3, prime_bound=2, rows={2: (0, 0)})


def test_builtin_dataset_loads():
    data = load_eigenvalues(builtin_dataset_path(), expected_weight=20)
    assert data.prime_bound == 79
    assert len(data.rows) == 22  # pi(79)
    assert data.primes == primes_up_to(79)
    assert data.rows[2] == (-840960, 248256200704)


def test_builtin_dataset_satake_invariants():
    # downstream validation: every row yields exactly unimodular parameters
    from mpmath import mp

    from siegellf.precision import PrecisionContext
    from siegellf.satake import satake_parameters

    ctx = PrecisionContext(working_digits=50)
    data = load_eigenvalues(builtin_dataset_path())
    triples = satake_parameters(data, ctx)
    assert sorted(triples) == data.primes
    with ctx.workdps():
        for t in triples.values():
            assert max(abs(abs(a) - 1) for a in t.alphas) < mp.mpf("1e-20")
            assert abs(t.alpha0**2 * t.alpha1 * t.alpha2 - 1) < mp.mpf("1e-25")
