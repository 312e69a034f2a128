"""Closed intervals with exact rational endpoints."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polynomials import Rational, as_fraction


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __init__(self, lo: Rational, hi: Rational):
        flo, fhi = as_fraction(lo), as_fraction(hi)
        if flo > fhi:
            raise ValueError(f"interval endpoints out of order: {flo} > {fhi}")
        object.__setattr__(self, "lo", flo)
        object.__setattr__(self, "hi", fhi)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Rational) -> bool:
        fx = as_fraction(x)
        return self.lo <= fx <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps_interior(self, other: "Interval") -> bool:
        """True when the intersection has positive length."""
        return max(self.lo, other.lo) < min(self.hi, other.hi)

    def intersect(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def as_floats(self) -> tuple[float, float]:
        return float(self.lo), float(self.hi)

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


UNIT = Interval(0, 1)
