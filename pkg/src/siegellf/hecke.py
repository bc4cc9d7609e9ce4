"""Ingestion of Hecke eigenvalue tables lambda(p), lambda(p^2) for a genus-2 eigenform."""

from __future__ import annotations

import dataclasses
import importlib.resources
from fractions import Fraction
from pathlib import Path


class DataFormatError(ValueError):
    """Malformed eigenvalue file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingPrimeError(DataFormatError):
    pass


class WeightMismatchError(DataFormatError):
    pass


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    return [i for i, v in enumerate(sieve) if v]


def _parse_exact(token: str) -> int | Fraction:
    if "/" in token:
        return Fraction(token)
    return int(token)


@dataclasses.dataclass(frozen=True)
class HeckeEigenvalues:
    """Exact eigenvalues lambda(p), lambda(p^2) for every prime p <= prime_bound.

    Values are arbitrary-size integers (or rationals); they are never floated
    here, so they can enter polynomial coefficients without precision loss.
    """

    weight: int
    prime_bound: int
    rows: dict[int, tuple[int | Fraction, int | Fraction]]

    def __post_init__(self):
        if self.weight < 4 or self.weight % 2 != 0:
            raise ValueError("weight must be an even integer >= 4")
        expected = primes_up_to(self.prime_bound)
        got = sorted(self.rows)
        if got != expected:
            missing = sorted(set(expected) - set(self.rows))
            if missing:
                raise MissingPrimeError(f"missing primes {missing} (P={self.prime_bound})")
            raise DataFormatError(f"unexpected prime entries {sorted(set(got) - set(expected))}")

    @property
    def primes(self) -> list[int]:
        return sorted(self.rows)

    def serialize(self) -> str:
        lines = [f"# weight={self.weight} prime_bound={self.prime_bound}"]
        for p in self.primes:
            lp, lp2 = self.rows[p]
            lines.append(f"{p} {lp} {lp2}")
        return "\n".join(lines) + "\n"


def load_eigenvalues(path, expected_weight: int | None = None) -> HeckeEigenvalues:
    """Parse an eigenvalue file.

    Format: a header line ``# weight=<k> prime_bound=<P>`` followed by rows
    ``<p> <lambda_p> <lambda_p2>``; further ``#`` lines are comments.
    """
    text = Path(path).read_text(encoding="ascii")
    weight = prime_bound = None
    rows: dict[int, tuple[int | Fraction, int | Fraction]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if weight is None and "weight=" in line:
                try:
                    fields = dict(
                        part.split("=", 1) for part in line.lstrip("# ").split() if "=" in part
                    )
                    weight = int(fields["weight"])
                    prime_bound = int(fields["prime_bound"])
                except (KeyError, ValueError) as exc:
                    raise DataFormatError(f"bad header: {raw!r}", lineno) from exc
            continue
        parts = line.split()
        if len(parts) != 3:
            raise DataFormatError(f"expected '<p> <lambda_p> <lambda_p2>', got {raw!r}", lineno)
        try:
            p = int(parts[0])
            lp = _parse_exact(parts[1])
            lp2 = _parse_exact(parts[2])
        except ValueError as exc:
            raise DataFormatError(f"non-numeric entry in {raw!r}", lineno) from exc
        if p in rows:
            raise DataFormatError(f"duplicate prime {p}", lineno)
        rows[p] = (lp, lp2)
    if weight is None or prime_bound is None:
        raise DataFormatError("missing '# weight=<k> prime_bound=<P>' header")
    if expected_weight is not None and weight != expected_weight:
        raise WeightMismatchError(f"file has weight {weight}, expected {expected_weight}")
    try:
        return HeckeEigenvalues(weight=weight, prime_bound=prime_bound, rows=rows)
    except MissingPrimeError:
        raise
    except DataFormatError:
        raise


def builtin_dataset_path() -> Path:
    """Path of the bundled weight-20 eigenvalue table (p <= 79)."""
    resource = importlib.resources.files("siegellf.data") / "upsilon20_p79.txt"
    return Path(str(resource))
