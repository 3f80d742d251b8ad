"""Exact probability vectors on the vertex set."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable


class MeasureInputError(ValueError):
    pass


@dataclass(frozen=True)
class Measure:
    mass: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if any(m < 0 for m in self.mass) or sum(self.mass, Fraction(0)) != 1:
            raise MeasureInputError("measure must be nonnegative and sum to exactly 1")

    @classmethod
    def uniform(cls, n: int) -> "Measure":
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def dirac(cls, n: int, x: int) -> "Measure":
        return cls(tuple(Fraction(int(v == x)) for v in range(n)))

    def of(self, members: Iterable[int]) -> Fraction:
        return sum((self.mass[v] for v in set(members)), Fraction(0))


def sqrt_at_least(a: Fraction, eps: Fraction) -> bool:
    """Exact test of ``a >= 1 - sqrt(eps)`` without irrational arithmetic."""
    gap = 1 - a
    return gap <= 0 or eps >= gap * gap


def read_measure(path: str | Path, n: int) -> Measure:
    mass = [Fraction(0)] * n
    for ln in Path(path).read_text().splitlines():
        if ln.strip():
            v, num, den = map(int, ln.split())
            mass[v] += Fraction(num, den)
    return Measure(tuple(mass))


def write_measure(mu: Measure, path: str | Path) -> None:
    Path(path).write_text("".join(f"{v} {m.numerator} {m.denominator}\n" for v, m in enumerate(mu.mass)))
