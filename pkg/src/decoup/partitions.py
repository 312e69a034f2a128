"""Tangency predicates, admissible partitions, coarsening, tiling, and the
dyadic block decomposition of the canonical partition.

The tangency predicate ("property P(r)") asks that the graph of the phase
deviate from every tangent line over the interval by at most 2r.  All
predicates run on exact rationals; search loops (the greedy builder) run in
floats and the resulting cuts are then certified exactly.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Literal, Sequence

import numpy as np

from . import polynomials as poly
from .errors import InternalInvariantError, PreconditionViolated
from .intervals import Interval
from .phases import PolyPhase, SupBound, sup_abs_deriv
from .polynomials import Coeffs, Rational, as_fraction

Mode = Literal["exact", "taylor"]

_WIDTH = Fraction(1, 10**12)


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class Partition:
    """Ordered interval decomposition of a base interval at a scale r.

    The admissibility flags are tri-state: None means unchecked; when set
    they record the result of the corresponding predicate at ``scale_r``.
    """

    base: Interval
    cuts: tuple[Fraction, ...]
    scale_r: Fraction
    super_admissible: bool | None = None
    sub_admissible: bool | None = None
    label: str = ""

    def __post_init__(self):
        cuts = tuple(as_fraction(c) for c in self.cuts)
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "scale_r", as_fraction(self.scale_r))
        if len(cuts) < 2:
            raise ValueError("a partition needs at least two cut points")
        if cuts[0] != self.base.lo or cuts[-1] != self.base.hi:
            raise ValueError("cuts must span the base interval")
        if any(a >= b for a, b in zip(cuts, cuts[1:])):
            raise ValueError("cuts must be strictly increasing")

    @property
    def n_cells(self) -> int:
        return len(self.cuts) - 1

    @property
    def cells(self) -> tuple[Interval, ...]:
        return tuple(Interval(a, b) for a, b in zip(self.cuts, self.cuts[1:]))

    def cell(self, i: int) -> Interval:
        return Interval(self.cuts[i], self.cuts[i + 1])

    @property
    def cut_floats(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.cuts)

    def with_flags(self, sup: bool | None, sub: bool | None) -> "Partition":
        return replace(self, super_admissible=sup, sub_admissible=sub)


def trivial_partition(base: Interval, r: Rational) -> Partition:
    return Partition(base, (base.lo, base.hi), as_fraction(r), label="trivial")


def _exact_sqrt(x: Fraction) -> Fraction | None:
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def canonical_partition(delta: Rational) -> Partition:
    """Uniform partition of [0,1] into cells of length delta**(1/2)."""
    d = as_fraction(delta)
    root = _exact_sqrt(d)
    if root is None or (1 / root).denominator != 1:
        raise ValueError("canonical partition needs delta with integer delta**(-1/2)")
    n = int(1 / root)
    return Partition(Interval(0, 1), tuple(Fraction(k, n) for k in range(n + 1)), d,
                     label="canonical")


def refine_partition(partition: Partition, factor: int) -> Partition:
    """Split every cell into ``factor`` equal parts (deliberately finer than
    sub-admissible; used as a negative control)."""
    if factor < 2:
        raise ValueError("factor must be >= 2")
    cuts: list[Fraction] = []
    for a, b in zip(partition.cuts, partition.cuts[1:]):
        step = (b - a) / factor
        cuts.extend(a + k * step for k in range(factor))
    cuts.append(partition.cuts[-1])
    return Partition(partition.base, tuple(cuts), partition.scale_r,
                     label=f"{partition.label or 'partition'}/refined{factor}")


# ---------------------------------------------------------------------------
# certified sup machinery


@functools.lru_cache(maxsize=1024)
def _exact_deriv(phase: PolyPhase, order: int) -> Coeffs:
    return poly.derivative(phase.coeffs, order)


def _enclosure_roots(
    coeffs: Coeffs, lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[tuple[Fraction, Fraction], ...]:
    if poly.is_zero(coeffs) or poly.degree(coeffs) == 0:
        return ()
    return tuple(poly.real_roots(coeffs, lo, hi, width))


@functools.lru_cache(maxsize=4096)
def _deriv_roots_cached(
    phase: PolyPhase, order: int, lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[tuple[Fraction, Fraction], ...]:
    return _enclosure_roots(_exact_deriv(phase, order), lo, hi, width)


@functools.lru_cache(maxsize=4096)
def _curvature_profile(
    phase: PolyPhase, lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[tuple[Fraction, Fraction, Fraction, Fraction], ...]:
    """Enclosures (u, v, vlo, vhi) of the critical points of phi'' on
    [lo, hi] with certified |phi''| bounds at each."""
    second = _exact_deriv(phase, 2)
    if poly.degree(second) < 1:
        return ()
    lip = poly.lipschitz_bound(second, lo, hi)
    out = []
    for u, v in _deriv_roots_cached(phase, 3, lo, hi, width):
        base = max(abs(poly.evaluate(second, u)), abs(poly.evaluate(second, v)))
        out.append((u, v, base, base + lip * (v - u)))
    return tuple(out)


def _sup_abs_bounds(
    coeffs: Coeffs, a: Fraction, b: Fraction, width: Fraction
) -> tuple[Fraction, Fraction]:
    """Certified bounds for sup |p| over [a, b]: endpoints plus isolated
    critical points with a Lipschitz slack on each enclosure."""
    lo_val = max(abs(poly.evaluate(coeffs, a)), abs(poly.evaluate(coeffs, b)))
    hi_val = lo_val
    if poly.degree(coeffs) >= 2:
        lip = poly.lipschitz_bound(coeffs, a, b)
        for u, v in _enclosure_roots(poly.derivative(coeffs), a, b, width):
            base = max(abs(poly.evaluate(coeffs, u)), abs(poly.evaluate(coeffs, v)))
            lo_val = max(lo_val, base)
            hi_val = max(hi_val, base + lip * (v - u))
    return lo_val, max(lo_val, hi_val)


@functools.lru_cache(maxsize=2048)
def _float_deriv_roots(phase: PolyPhase, order: int) -> tuple[float, ...]:
    """Real roots of the order-th derivative, as floats, cached per phase."""
    cs = list(_float_coeffs_of(phase, order))
    while len(cs) > 1 and cs[-1] == 0.0:
        cs.pop()
    if len(cs) <= 1:
        return ()
    if len(cs) == 2:
        return (-cs[0] / cs[1],)
    if len(cs) == 3:
        c, b, a = cs
        disc = b * b - 4 * a * c
        if disc < 0:
            return ()
        sq = math.sqrt(disc)
        return (-b - sq) / (2 * a), (-b + sq) / (2 * a)
    roots = np.roots(cs[::-1])
    return tuple(sorted(float(r.real) for r in roots if abs(r.imag) < 1e-9))


def _real_roots_float(cs: Sequence[float], a: float, b: float) -> list[float]:
    coeffs = list(cs)
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    if len(coeffs) == 2:
        r = -coeffs[0] / coeffs[1]
        return [r] if a <= r <= b else []
    if len(coeffs) == 3:
        c0, c1, c2 = coeffs
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            return []
        sq = math.sqrt(disc)
        rs = ((-c1 - sq) / (2 * c2), (-c1 + sq) / (2 * c2))
        return [r for r in rs if a <= r <= b]
    roots = np.roots(coeffs[::-1])
    return [float(r.real) for r in roots if abs(r.imag) < 1e-9 and a <= r.real <= b]


# ---------------------------------------------------------------------------
# the tangency predicate


def _taylor_quantity_float(phase: PolyPhase, a: float, b: float) -> float:
    second = _float_coeffs_of(phase, 2)
    best = max(abs(poly.evaluate_float(second, a)), abs(poly.evaluate_float(second, b)))
    for r in _float_deriv_roots(phase, 3):
        if a <= r <= b:
            best = max(best, abs(poly.evaluate_float(second, r)))
    return best * (b - a) ** 2


@functools.lru_cache(maxsize=512)
def _float_coeffs_of(phase: PolyPhase, order: int) -> tuple[float, ...]:
    return tuple(float(c) for c in poly.derivative(phase.coeffs, order))


def _deviation_sup_float(phase: PolyPhase, a: float, b: float) -> float:
    """sup over s, c in [a, b] of |phi(s) - phi(c) - phi'(c)(s - c)|.

    Candidate tangency points c are the endpoints and the real roots of
    phi''; for each c the deviation is a polynomial in s maximized at the
    endpoints or at roots of phi'(s) = phi'(c).  This enumeration is complete
    for polynomials at any degree.
    """
    f = _float_coeffs_of(phase, 0)
    df = _float_coeffs_of(phase, 1)
    c_cands = [a, b]
    for r in _float_deriv_roots(phase, 2):
        if a < r < b:
            c_cands.append(r)
    best = 0.0
    shifted = list(df)
    for c in c_cands:
        fc = poly.evaluate_float(f, c)
        dfc = poly.evaluate_float(df, c)
        shifted[0] = df[0] - dfc
        s_cands = [a, b] + _real_roots_float(shifted, a, b)
        for s in s_cands:
            dev = abs(poly.evaluate_float(f, s) - fc - dfc * (s - c))
            if dev > best:
                best = dev
    return best


def _deviation_sup_bounds(
    phase: PolyPhase, a: Fraction, b: Fraction, domain: Interval, width: Fraction
) -> tuple[Fraction, Fraction]:
    """Certified bounds for the tangent-deviation sup over [a, b].

    Tangency candidates c are the endpoints and the roots of phi'' (cached
    over the ambient domain); for each, the deviation in s is a polynomial
    whose sup is certified by _sup_abs_bounds.  Root-enclosure candidates
    carry a slack |dD/dc| <= Lip(phi'') * width * |b - a|.
    """
    second = _exact_deriv(phase, 2)
    c_cands: list[tuple[Fraction, Fraction]] = [(a, Fraction(0)), (b, Fraction(0))]
    if not poly.is_zero(second) and poly.degree(second) >= 1:
        lip2 = poly.lipschitz_bound(second, domain.lo, domain.hi)
        pwidth = domain.length / 10**16
        for u, v in _deriv_roots_cached(phase, 2, domain.lo, domain.hi, pwidth):
            if v < a or u > b:
                continue
            c_cands.append(((u + v) / 2, lip2 * (v - u) * (b - a)))
    lo_val, hi_val = Fraction(0), Fraction(0)
    coeffs = phase.coeffs
    dcoeffs = _exact_deriv(phase, 1)
    for c, slack in c_cands:
        fc = poly.evaluate(coeffs, c)
        dfc = poly.evaluate(dcoeffs, c)
        dev = poly.sub(coeffs, poly.normalize((fc - dfc * c, dfc)))
        dlo, dhi = _sup_abs_bounds(dev, a, b, width)
        if a <= c <= b:
            lo_val = max(lo_val, dlo - slack if slack else dlo)
        hi_val = max(hi_val, dhi + slack)
    return max(lo_val, Fraction(0)), hi_val


def _certified_property_p(
    phase: PolyPhase,
    a: Fraction,
    b: Fraction,
    r: Fraction,
    mode: Mode,
    domain: Interval | None = None,
) -> bool:
    """Three-valued check collapsed deterministically: refine enclosures and,
    if the threshold still lands inside the bounds, compare the midpoint."""
    dom = domain if domain is not None else Interval(a, b)
    width = (b - a) / 10**16
    pwidth = dom.length / 10**16
    for _ in range(2):
        if mode == "taylor":
            second = _exact_deriv(phase, 2)
            lo_val = max(abs(poly.evaluate(second, a)), abs(poly.evaluate(second, b)))
            hi_val = lo_val
            for u, v, vlo, vhi in _curvature_profile(phase, dom.lo, dom.hi, pwidth):
                if v < a or u > b:
                    continue
                hi_val = max(hi_val, vhi)
                if u >= a and v <= b:
                    lo_val = max(lo_val, vlo)
            qlo, qhi = lo_val * (b - a) ** 2, max(lo_val, hi_val) * (b - a) ** 2
            threshold = 4 * r
        else:
            qlo, qhi = _deviation_sup_bounds(phase, a, b, dom, width)
            threshold = 2 * r
        if qhi <= threshold:
            return True
        if qlo > threshold:
            return False
        width /= 2**16
    return (qlo + qhi) / 2 <= threshold


def has_property_p(
    phase: PolyPhase, interval: Interval, r: Rational, mode: Mode = "exact"
) -> bool:
    """Tangent-deviation test: exact mode bounds the bivariate deviation sup
    by 2r; taylor mode bounds sup|phi''| |I|^2 by 4r.  taylor=True implies
    exact=True; the converse fails for phases with vanishing curvature."""
    rr = as_fraction(r)
    if rr <= 0:
        raise ValueError("scale r must be positive")
    if phase.is_linear:
        return True
    return _certified_property_p(phase, interval.lo, interval.hi, rr, mode)


def is_super_admissible(
    phase: PolyPhase, partition: Partition, r: Rational | None = None, mode: Mode = "exact"
) -> bool:
    rr = as_fraction(r) if r is not None else partition.scale_r
    return all(has_property_p(phase, c, rr, mode) for c in partition.cells)


def is_sub_admissible(
    phase: PolyPhase, partition: Partition, r: Rational | None = None, mode: Mode = "exact"
) -> bool:
    rr = as_fraction(r) if r is not None else partition.scale_r
    cuts = partition.cuts
    return not any(
        has_property_p(phase, Interval(cuts[i], cuts[i + 2]), rr, mode)
        for i in range(len(cuts) - 2)
    )


def is_admissible(
    phase: PolyPhase, partition: Partition, r: Rational | None = None, mode: Mode = "exact"
) -> bool:
    return is_super_admissible(phase, partition, r, mode) and is_sub_admissible(
        phase, partition, r, mode
    )


# ---------------------------------------------------------------------------
# greedy construction


def greedy_partition(
    phase: PolyPhase,
    base: Interval,
    r: Rational,
    mode: Mode = "exact",
    cut_tol: Rational = Fraction(1, 10**14),
) -> Partition:
    """Left-greedy admissible partition: each cut is the supremum t such that
    [a_j, t] satisfies the tangency property at scale r.

    The sup is located by float bisection and then pinned by exact bisection
    to within ``cut_tol * |base|``; the accepted cell is certified to satisfy
    the property and its one-step extension is certified to fail, so the
    result is admissible by construction.
    """
    rr = as_fraction(r)
    if rr <= 0:
        raise ValueError("scale r must be positive")
    if phase.is_linear:
        return trivial_partition(base, rr).with_flags(True, True)

    tol = as_fraction(cut_tol) * base.length
    sup2 = sup_abs_deriv(phase, base, 2)
    if sup2.hi == 0:
        return trivial_partition(base, rr).with_flags(True, True)
    min_step = 2 * math.sqrt(float(rr) / float(sup2.hi)) if sup2.hi > 0 else 0.0

    if mode == "taylor":
        def quantity(a: float, b: float) -> float:
            return _taylor_quantity_float(phase, a, b)

        threshold = 4 * float(rr)
    else:
        def quantity(a: float, b: float) -> float:
            return _deviation_sup_float(phase, a, b)

        threshold = 2 * float(rr)

    cuts: list[Fraction] = [base.lo]
    hi_end = float(base.hi)
    tol_f = float(tol)
    while cuts[-1] < base.hi:
        a = cuts[-1]
        af = float(a)
        if quantity(af, hi_end) <= threshold * (1 + 1e-6) and _certified_property_p(
            phase, a, base.hi, rr, mode, base
        ):
            cuts.append(base.hi)
            break
        # expanding float search for a bracket around the boundary, seeded
        # with the previous cell width (greedy widths vary slowly)
        if len(cuts) >= 2:
            step = 0.5 * float(cuts[-1] - cuts[-2])
        else:
            step = max(min_step * 0.5, 1e-300)
        t_true, g_true = af, -threshold
        t_false, g_false = hi_end, quantity(af, hi_end) - threshold
        t = min(af + step, hi_end)
        for _ in range(200):
            g = quantity(af, t) - threshold
            if g <= 0:
                t_true, g_true = t, g
                if t >= hi_end:
                    break
                t = min(af + 2 * (t - af), hi_end)
            else:
                t_false, g_false = t, g
                break
        # Illinois iteration on quantity(t) - threshold within the bracket
        lo_f, hi_f, glo, ghi = t_true, t_false, g_true, g_false
        side = 0
        for _ in range(80):
            if hi_f - lo_f <= tol_f:
                break
            if ghi == glo:
                mid = 0.5 * (lo_f + hi_f)
            else:
                mid = lo_f - glo * (hi_f - lo_f) / (ghi - glo)
                margin = 0.1 * (hi_f - lo_f)
                mid = min(max(mid, lo_f + min(margin, 0.25 * tol_f + 1e-18)),
                          hi_f - min(margin, 0.25 * tol_f + 1e-18))
            g = quantity(af, mid) - threshold
            if g <= 0:
                if side == -1:
                    ghi *= 0.5
                lo_f, glo, side = mid, g, -1
            else:
                if side == 1:
                    glo *= 0.5
                hi_f, ghi, side = mid, g, 1
        # certify the accepted cell, nudging down past float error if needed
        t_lo = as_fraction(lo_f)
        if t_lo <= a:
            t_lo = as_fraction(hi_f)
        ok = False
        for k in range(24):
            if _certified_property_p(phase, a, t_lo, rr, mode, base):
                ok = True
                break
            t_lo = max(a + (t_lo - a) / 2, t_lo - 2**k * tol)
        if not ok or t_lo <= a:
            raise InternalInvariantError("could not certify a greedy cell")
        # certify that a small extension fails (sub-admissibility witness)
        t_hi = max(as_fraction(hi_f), t_lo + tol)
        if t_hi < base.hi:
            for k in range(24):
                if not _certified_property_p(phase, a, min(t_hi, base.hi), rr, mode, base):
                    break
                t_hi = t_hi + 2**k * tol
                if t_hi >= base.hi:
                    # property holds certified up to the end: accept final cell
                    t_lo, t_hi = base.hi, base.hi
                    break
        if float(t_lo - a) < min_step * (1 - 1e-9) and t_lo < base.hi:
            raise InternalInvariantError(
                f"greedy step {float(t_lo - a):.3e} below the lower bound "
                f"{min_step:.3e}"
            )
        cuts.append(t_lo)

    return Partition(base, tuple(cuts), rr, super_admissible=True,
                     sub_admissible=True, label=f"greedy:{mode}")


def coarsen_pairs(partition: Partition, phase: PolyPhase, delta: Rational,
                  mode: Mode = "exact") -> Partition:
    """Merge cells pairwise; every merged cell except possibly the last has
    length at least 2 sqrt(delta / sup|phi''|) when the input partition is
    sub-admissible at delta."""
    d = as_fraction(delta)
    if partition.n_cells == 1:
        return partition
    if partition.sub_admissible is None:
        if not is_sub_admissible(phase, partition, d, mode):
            raise PreconditionViolated("partition is not sub-admissible at delta")
    elif partition.sub_admissible is False:
        raise PreconditionViolated("partition is not sub-admissible at delta")
    old = partition.cuts
    n = partition.n_cells
    cuts = [old[i] for i in range(0, n + 1, 2)]
    if n % 2 == 1:
        if cuts[-1] != old[-1]:
            cuts.append(old[-1])
    sup2 = sup_abs_deriv(phase, partition.base, 2)
    if sup2.hi > 0:
        floor = 2 * math.sqrt(float(d) / float(sup2.hi))
        merged = list(zip(cuts, cuts[1:]))
        for a, b in merged[:-1]:
            if float(b - a) < floor * (1 - 1e-9):
                raise InternalInvariantError(
                    f"merged cell [{float(a)}, {float(b)}] shorter than {floor}"
                )
    return Partition(partition.base, tuple(cuts), d,
                     label=f"{partition.label or 'partition'}/paired")


def count_within_bound(partition: Partition, phase: PolyPhase, delta: Rational) -> bool:
    """True iff the cell count is at most delta**(-1/2) sup|phi''|**(1/2) + 1."""
    d = as_fraction(delta)
    sup2 = sup_abs_deriv(phase, partition.base, 2)
    n = partition.n_cells
    if n <= 1:
        return True
    # n <= sqrt(sup/delta) + 1  <=>  (n-1)^2 <= sup/delta
    return (n - 1) ** 2 <= sup2.exact / d


# ---------------------------------------------------------------------------
# tiling


@dataclass(frozen=True)
class TilingResult:
    l: Fraction
    u1: tuple[int, ...]
    u2: tuple[int, ...]
    cell_map: dict[int, tuple[int, int]]

    def counts(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for cell in self.cell_map.values():
            out[cell] = out.get(cell, 0) + 1
        return out


def tile(intervals: Sequence[Interval], l0: Rational) -> TilingResult:
    """Sort near-equal-length disjoint intervals into dyadic cells of size
    l in [4 l0, 8 l0) and half-shifted cells, fewer than 8 per cell."""
    f0 = as_fraction(l0)
    if not 0 < f0 <= Fraction(1, 4):
        raise PreconditionViolated(f"l0 must lie in (0, 1/4], got {float(f0)}")
    for idx, iv in enumerate(intervals):
        if not (f0 <= iv.length <= 2 * f0):
            raise PreconditionViolated(
                f"interval {idx} {iv} has length outside [l0, 2*l0]"
            )
        if not (0 <= iv.lo and iv.hi <= 1):
            raise PreconditionViolated(f"interval {idx} {iv} not inside [0,1]")
    ordered = sorted(range(len(intervals)), key=lambda i: intervals[i].lo)
    for i, j in zip(ordered, ordered[1:]):
        if intervals[i].overlaps_interior(intervals[j]):
            raise PreconditionViolated(
                f"intervals {i} and {j} overlap: {intervals[i]}, {intervals[j]}"
            )

    m = 0
    while Fraction(1, 2 ** (m + 1)) >= 4 * f0:
        m += 1
    l = Fraction(1, 2**m)
    if not 4 <= l / f0 < 8:
        raise InternalInvariantError(f"tile width ratio {float(l / f0)} outside [4, 8)")

    u1, u2 = [], []
    cell_map: dict[int, tuple[int, int]] = {}
    for idx, iv in enumerate(intervals):
        j = int(iv.lo / l) + 1
        if iv.hi <= j * l:
            u1.append(idx)
            cell_map[idx] = (1, j)
        else:
            # straddles the boundary j*l; fits in the half-shifted cell there
            if not ((j - Fraction(1, 2)) * l <= iv.lo and iv.hi <= (j + Fraction(1, 2)) * l):
                raise InternalInvariantError(
                    f"interval {idx} {iv} fits neither cell family"
                )
            u2.append(idx)
            cell_map[idx] = (2, j)
    result = TilingResult(l, tuple(u1), tuple(u2), cell_map)
    for cell, count in result.counts().items():
        if count >= 8:
            raise InternalInvariantError(f"cell {cell} holds {count} >= 8 intervals")
    return result


# ---------------------------------------------------------------------------
# dyadic blocks


@dataclass(frozen=True)
class DyadicBlock:
    n: int
    block: Interval
    cells: Partition
    scale: Fraction
    sub_admissible_exact: bool
    sub_admissible_taylor: bool


def dyadic_blocks(delta: Rational, d: int) -> tuple[DyadicBlock, ...]:
    """Split the canonical delta**(1/2)-partition into dyadic index blocks
    and report, per block, whether the block is sub-admissible for s**d at
    the block scale 2**(d n) delta**(d/2).

    The sub-admissibility of the blocks is reported rather than asserted:
    direct computation shows the adjacent-union deviation falls short of the
    block scale once 2**(2n) exceeds d(d-1).
    """
    f = as_fraction(delta)
    root = _exact_sqrt(f)
    if root is None:
        raise ValueError("delta must have an exact square root")
    inv = 1 / root
    if inv.denominator != 1 or (inv.numerator & (inv.numerator - 1)) != 0:
        raise ValueError("delta**(-1/2) must be a power of two")
    if d < 3:
        raise ValueError("d must be at least 3")
    n_max = inv.numerator.bit_length() - 1
    phase = PolyPhase.monomial(d)
    blocks = []
    for n in range(1, n_max + 1):
        k_lo, k_hi = 2 ** (n - 1), 2**n  # cells k with k_lo <= k < k_hi
        cuts = tuple((k - 1) * root for k in range(k_lo, k_hi)) + ((k_hi - 1) * root,)
        scale = Fraction(2) ** (d * n) * root**d
        block = Interval(cuts[0], cuts[-1])
        cells = Partition(block, cuts, scale, label=f"dyadic-block-{n}")
        blocks.append(
            DyadicBlock(
                n=n,
                block=block,
                cells=cells,
                scale=scale,
                sub_admissible_exact=is_sub_admissible(phase, cells, scale, "exact"),
                sub_admissible_taylor=is_sub_admissible(phase, cells, scale, "taylor"),
            )
        )
    return tuple(blocks)
