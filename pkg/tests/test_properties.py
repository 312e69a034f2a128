"""Property-based checks of the spec invariants (hypothesis)."""

from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from decoup import (
    Interval,
    PolyPhase,
    greedy_partition,
    has_property_p,
    is_sub_admissible,
    is_super_admissible,
    rescale_to_unit,
    sup_abs_deriv,
    tile,
)

_coeff = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=64)


@st.composite
def phases(draw, min_degree=2, max_degree=6):
    degree = draw(st.integers(min_degree, max_degree))
    coeffs = [draw(_coeff) for _ in range(degree)] + [
        draw(_coeff.filter(lambda c: c != 0))]
    return PolyPhase(coeffs)


@st.composite
def subintervals(draw):
    lo = draw(st.fractions(min_value=Fraction(0), max_value=Fraction(7, 8),
                           max_denominator=128))
    length = draw(st.fractions(min_value=Fraction(1, 128), max_value=1 - lo,
                               max_denominator=128))
    return Interval(lo, lo + length)


@given(phases(), subintervals(), st.integers(4, 16))
@settings(max_examples=60, deadline=None)
def test_taylor_implies_exact(phase, interval, k):
    r = Fraction(1, 2**k)
    if has_property_p(phase, interval, r, "taylor"):
        assert has_property_p(phase, interval, r, "exact")


@given(phases(max_degree=4), st.integers(6, 12))
@settings(max_examples=25, deadline=None)
def test_greedy_output_admissible(phase, k):
    sup = sup_abs_deriv(phase, Interval(0, 1), 2)
    if sup.hi == 0:
        return
    shift = max(0, sup.hi.numerator.bit_length() - sup.hi.denominator.bit_length() + 1)
    phase = phase.scaled(Fraction(1, 2**shift))
    r = Fraction(1, 2**k)
    part = greedy_partition(phase, Interval(0, 1), r, "exact")
    assert is_super_admissible(phase, part, r, "exact")
    assert is_sub_admissible(phase, part, r, "exact")


@given(phases(max_degree=5), subintervals(), subintervals())
@settings(max_examples=40, deadline=None)
def test_rescale_composition(phase, j, sub):
    once = rescale_to_unit(rescale_to_unit(phase, j), sub)
    composed = Interval(j.lo + j.length * sub.lo, j.lo + j.length * sub.hi)
    assert once == rescale_to_unit(phase, composed)


@given(phases(max_degree=6), subintervals())
@settings(max_examples=40, deadline=None)
def test_rescale_contracts_curvature(phase, j):
    psi = rescale_to_unit(phase, j)
    sup_psi = sup_abs_deriv(psi, Interval(0, 1), 2)
    sup_phi = sup_abs_deriv(phase, Interval(0, 1), 2)
    assert sup_psi.lo <= sup_phi.hi * (1 + Fraction(1, 10**9))


@st.composite
def tiling_inputs(draw):
    l0 = Fraction(1, draw(st.sampled_from([8, 12, 16, 24, 32])))
    intervals = []
    pos = Fraction(0)
    for _ in range(draw(st.integers(1, 12))):
        gap = l0 * draw(st.fractions(min_value=0, max_value=Fraction(1, 2),
                                     max_denominator=16))
        length = l0 * (1 + draw(st.fractions(min_value=0, max_value=1,
                                             max_denominator=16)))
        if pos + gap + length > 1:
            break
        intervals.append(Interval(pos + gap, pos + gap + length))
        pos += gap + length
    return l0, intervals


@given(tiling_inputs())
@settings(max_examples=60, deadline=None)
def test_tile_postconditions(data):
    l0, intervals = data
    if not intervals:
        return
    res = tile(intervals, l0)
    assert sorted(res.u1 + res.u2) == list(range(len(intervals)))
    assert 4 <= res.l / l0 < 8
    assert max(res.counts().values()) < 8
    for idx, (family, j) in res.cell_map.items():
        if family == 1:
            cell = Interval((j - 1) * res.l, j * res.l)
        else:
            lo = max(Fraction(0), (j - Fraction(1, 2)) * res.l)
            cell = Interval(lo, min(Fraction(1), (j + Fraction(1, 2)) * res.l))
        assert cell.contains_interval(intervals[idx])


@given(st.integers(0, 40))
@settings(max_examples=41, deadline=None)
def test_geometric_sum_closed_form(n):
    from decoup import geometric_exponent_sum

    val = geometric_exponent_sum(n)
    assert val == 3 * (1 - Fraction(2, 3) ** n)
    assert 0 <= val < 3
