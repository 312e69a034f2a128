"""Curved vertical neighborhoods, tangent parallelograms, dual rectangles,
and the Minkowski-sum containment checks for the dyadic block decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalInvariantError, NotAdmissibleCell, PreconditionViolated
from .intervals import Interval
from .partitions import Mode, Partition, _deviation_sup_bounds, dyadic_blocks, has_property_p
from .phases import PolyPhase
from .polynomials import Rational, as_fraction


@dataclass(frozen=True)
class NeighborhoodSpec:
    """The set of (s, t) with s in the interval and |t - phase(s)| <= r."""

    phase: PolyPhase
    interval: Interval
    r: Fraction

    def __init__(self, phase: PolyPhase, interval: Interval, r: Rational):
        fr = as_fraction(r)
        if fr <= 0:
            raise ValueError("thickness r must be positive")
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "interval", interval)
        object.__setattr__(self, "r", fr)

    def contains(self, point: tuple[Rational, Rational]) -> bool:
        s, t = as_fraction(point[0]), as_fraction(point[1])
        if not self.interval.contains(s):
            return False
        return abs(t - self.phase.eval_exact(s)) <= self.r


@dataclass(frozen=True)
class DualRect:
    """Axis-parallel rectangle centered at the origin (frequency-side dual
    of a physical tube)."""

    x_len: Fraction
    y_len: Fraction

    def __init__(self, x_len: Rational, y_len: Rational):
        fx, fy = as_fraction(x_len), as_fraction(y_len)
        if fx <= 0 or fy <= 0:
            raise ValueError("side lengths must be positive")
        object.__setattr__(self, "x_len", fx)
        object.__setattr__(self, "y_len", fy)

    def reciprocal(self) -> "DualRect":
        return DualRect(1 / self.x_len, 1 / self.y_len)


@dataclass(frozen=True)
class CapParallelogram:
    """Parallelogram over a cell: center line tangent at the cell midpoint,
    half-height 3r.  Contains the r-neighborhood of the graph whenever the
    cell satisfies the tangency property at scale r."""

    base: Interval
    slope: Fraction
    intercept: Fraction
    half_height: Fraction
    tight_half_height: float

    def contains(self, point: tuple[Rational, Rational]) -> bool:
        s, t = as_fraction(point[0]), as_fraction(point[1])
        if not self.base.contains(s):
            return False
        return abs(t - (self.slope * s + self.intercept)) <= self.half_height

    @property
    def area(self) -> Fraction:
        return 2 * self.half_height * self.base.length


def cap_parallelogram(
    phase: PolyPhase, interval: Interval, r: Rational, mode: Mode = "exact"
) -> CapParallelogram:
    """Tangent parallelogram over a cell satisfying the tangency property.

    The deviation from the midpoint tangent is at most 2r and the
    neighborhood adds thickness r, so half-height 3r always contains; the
    certified tight half-height r + sup(deviation) is also reported.
    """
    fr = as_fraction(r)
    if not has_property_p(phase, interval, fr, mode):
        raise NotAdmissibleCell(
            f"interval {interval} fails the tangency property at r={float(fr)}"
        )
    c = interval.midpoint
    slope = phase.derivative().eval_exact(c)
    intercept = phase.eval_exact(c) - slope * c
    _, dev_hi = _deviation_sup_bounds(
        phase, interval.lo, interval.hi, interval, interval.length / 10**12
    )
    return CapParallelogram(
        base=interval,
        slope=slope,
        intercept=intercept,
        half_height=3 * fr,
        tight_half_height=float(fr + dev_hi),
    )


@dataclass(frozen=True)
class MinkowskiReport:
    d: int
    delta: float
    n: int
    const: float
    contained: bool
    max_ratio: float
    horizontal_ok: bool
    empty_core: bool


def minkowski_contained(
    d: int,
    delta: Rational,
    n: int,
    const: float,
    dual_extents: tuple[float, float] | None = None,
) -> MinkowskiReport:
    """Check that thickening the graph of s**d over a dyadic block core by
    the dual rectangle [-delta, delta] x [-delta^{d/2}, delta^{d/2}] stays in
    the vertical neighborhood of scale const * 2**(d n) * delta**(d/2).

    The vertical excursion |s^d + v - (s+u)^d| is maximized at the corners
    u = +-delta, v = +-delta^{d/2} (monotone in both), and over s on a grid
    with a Lipschitz certificate; the max ratio to the block scale is
    reported alongside the horizontal no-overflow condition.
    """
    if d < 3:
        raise ValueError("d must be at least 3")
    f = as_fraction(delta)
    blocks = dyadic_blocks(f, d)
    if not 1 <= n <= len(blocks):
        raise ValueError(f"block index n={n} outside 1..{len(blocks)}")
    root = blocks[0].cells.cuts[1]  # delta**(1/2)
    a_n = float(Fraction(2) ** (d * n) * root**d)
    delta_f = float(f)
    if dual_extents is None:
        dual_u, dual_v = delta_f, delta_f ** (d / 2)
    else:
        dual_u, dual_v = dual_extents

    # block core: cells k = 2^(n-1)+1 .. 2^n-2 (first and last removed)
    k_lo, k_hi = 2 ** (n - 1) + 1, 2**n - 2
    if k_lo > k_hi:
        return MinkowskiReport(d, delta_f, n, const, True, 0.0, True, True)
    s_lo, s_hi = float((k_lo - 1) * root), float(k_hi * root)

    horizontal_ok = s_lo - dual_u >= 0 and s_hi + dual_u <= 1

    grid = 2048
    step = (s_hi - s_lo) / grid
    best = 0.0
    for i in range(grid + 1):
        s = s_lo + i * step
        for u in (-dual_u, dual_u):
            base = abs(s**d - (s + u) ** d)
            if base + dual_v > best:
                best = base + dual_v
    # |d/ds (s^d - (s+u)^d)| <= d (d-1) (s_hi + u)^(d-2) * u
    lip = d * (d - 1) * (s_hi + dual_u) ** (d - 2) * dual_u
    certified = best + lip * step / 2
    ratio = certified / a_n
    return MinkowskiReport(
        d, delta_f, n, const, bool(ratio <= const and horizontal_ok), ratio,
        horizontal_ok, False,
    )


@dataclass(frozen=True)
class OverlapReport:
    x_len: float
    neighbors: tuple[tuple[int, ...], ...]

    @property
    def max_overlap_count(self) -> int:
        return max(len(t) for t in self.neighbors)


def truncation_overlap(partition: Partition, dual: DualRect | Rational) -> OverlapReport:
    """For each cell, list which cells' supports smeared by the dual
    rectangle's horizontal half-width overlap it; the result is asserted to
    be contained in {k-1, k, k+1}.  A bare number stands in for the
    horizontal half-width (zero allowed, as the degenerate dual)."""
    x_len = dual.x_len if isinstance(dual, DualRect) else as_fraction(dual)
    if x_len < 0:
        raise ValueError("horizontal half-width must be nonnegative")
    cells = partition.cells
    min_len = min(c.length for c in cells)
    if x_len > min_len:
        raise PreconditionViolated(
            f"dual horizontal side {float(x_len)} exceeds the minimum "
            f"cell length {float(min_len)}"
        )
    out = []
    for k, cell in enumerate(cells):
        hits = []
        for kp, other in enumerate(cells):
            smeared = Interval(other.lo - x_len, other.hi + x_len)
            if smeared.overlaps_interior(cell):
                hits.append(kp)
        if any(abs(kp - k) > 1 for kp in hits):
            raise InternalInvariantError(
                f"cell {k} overlaps smeared supports {hits}, beyond its neighbors"
            )
        out.append(tuple(hits))
    return OverlapReport(float(x_len), tuple(out))
