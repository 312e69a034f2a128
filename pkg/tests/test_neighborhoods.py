"""Neighborhood geometry: membership, cap parallelograms, Minkowski
containment, and truncation overlap."""

import random
from fractions import Fraction

import pytest

from decoup import (
    DualRect,
    Interval,
    NeighborhoodSpec,
    NotAdmissibleCell,
    PolyPhase,
    PreconditionViolated,
    cap_parallelogram,
    canonical_partition,
    dyadic_blocks,
    greedy_partition,
    minkowski_contained,
    truncation_overlap,
)

S2 = PolyPhase.monomial(2)
S3 = PolyPhase.monomial(3)


class TestContains:
    def test_on_curve(self):
        nb = NeighborhoodSpec(S2, Interval(0, 1), Fraction(1, 10))
        assert nb.contains((0.5, 0.25))

    def test_outside(self):
        nb = NeighborhoodSpec(S2, Interval(0, 1), Fraction(1, 10))
        assert not nb.contains((0.5, 0.36))

    def test_boundary_thickness(self):
        nb = NeighborhoodSpec(S3, Interval(0, 1), Fraction(1, 1000))
        assert nb.contains((0.1, 0.0015))
        assert not nb.contains((0.1, 0.00201))
        assert not nb.contains((1.5, 3.375))  # outside the base interval


class TestCapParallelogram:
    def test_parabola_cell(self):
        r = Fraction(1, 256)
        width = Fraction(22, 256)  # just below sqrt(2r) ~ 0.0884
        cell = Interval(0, width)
        cap = cap_parallelogram(S2, cell, r, "exact")
        assert cap.half_height == 3 * r
        assert float(cap.slope) == float(width)  # 2 * midpoint
        rng = random.Random(1)
        for _ in range(1000):
            s = float(cell.lo) + rng.random() * float(cell.length)
            t = s * s + (2 * rng.random() - 1) * float(r)
            assert cap.contains((s, t))
        assert cap.area == 6 * r * cell.length

    def test_linear_degenerate(self):
        phase = PolyPhase([2, -1])
        r = Fraction(1, 64)
        cap = cap_parallelogram(phase, Interval(0, 1), r, "exact")
        assert cap.tight_half_height <= float(r) * (1 + 1e-12)
        assert cap.contains((0.5, 1.5 + 1 / 64))

    def test_cubic_first_greedy_cell(self):
        r = Fraction(1, 512)
        part = greedy_partition(S3, Interval(0, 1), r, "exact")
        cap = cap_parallelogram(S3, part.cell(0), r, "exact")
        rng = random.Random(2)
        a, b = part.cell(0).as_floats()
        for _ in range(1000):
            s = a + rng.random() * (b - a)
            t = s**3 + (2 * rng.random() - 1) * float(r)
            assert cap.contains((s, t))

    def test_rejects_bad_cell(self):
        with pytest.raises(NotAdmissibleCell):
            cap_parallelogram(S2, Interval(0, 1), Fraction(1, 256), "exact")


class TestMinkowski:
    def test_core_blocks_contained(self):
        rep = minkowski_contained(3, Fraction(1, 256), 3, 16.0)
        assert rep.contained and rep.horizontal_ok
        # two-term analytic estimate: (delta^{d/2} + 3 s^2 delta) / a_n
        delta = 1 / 256
        s_hi = (2**3 - 2) * delta**0.5
        a_n = 2**9 * delta**1.5
        analytic = (delta**1.5 + ((s_hi + delta) ** 3 - s_hi**3)) / a_n
        assert rep.max_ratio == pytest.approx(analytic, rel=0.05)

    def test_small_block_trivial(self):
        rep = minkowski_contained(3, Fraction(1, 256), 1, 16.0)
        assert rep.contained and rep.empty_core and rep.max_ratio == 0.0

    def test_degenerate_dual(self):
        rep = minkowski_contained(3, Fraction(1, 256), 3, 16.0, dual_extents=(0.0, 0.0))
        assert rep.contained and rep.max_ratio == 0.0

    def test_monotone_in_const(self):
        r1 = minkowski_contained(3, Fraction(1, 1024), 4, 24.0)
        r2 = minkowski_contained(3, Fraction(1, 1024), 4, 0.001)
        assert r1.contained and not r2.contained
        assert r1.max_ratio == r2.max_ratio


class TestTruncationOverlap:
    def test_canonical_neighbors(self):
        part = canonical_partition(Fraction(1, 16))
        rep = truncation_overlap(part, DualRect(Fraction(1, 16), 1))
        for k, hits in enumerate(rep.neighbors):
            expected = tuple(kp for kp in (k - 1, k, k + 1) if 0 <= kp < part.n_cells)
            assert hits == expected

    def test_zero_width(self):
        part = canonical_partition(Fraction(1, 16))
        rep = truncation_overlap(part, 0)
        assert all(hits == (k,) for k, hits in enumerate(rep.neighbors))

    def test_appendix_dimensions(self):
        delta = Fraction(1, 64)
        blocks = dyadic_blocks(delta, 3)
        root = blocks[0].cells.cuts[1]
        for b in blocks:
            if b.cells.n_cells == 1:
                continue
            rep = truncation_overlap(b.cells, DualRect(delta, root**3))
            assert rep.max_overlap_count <= 3

    def test_precondition(self):
        part = canonical_partition(Fraction(1, 16))
        with pytest.raises(PreconditionViolated):
            truncation_overlap(part, DualRect(Fraction(1, 2), 1))


def test_dual_rect_reciprocal():
    d = Fraction(1, 256)
    rect = DualRect(1 / d, 1 / d ** Fraction(3, 2) if False else Fraction(4096))
    # (delta^-1 x delta^-d/2) <-> (delta x delta^d/2) with d = 3, delta = 2^-8
    big = DualRect(Fraction(256), Fraction(4096))
    small = big.reciprocal()
    assert small.x_len == Fraction(1, 256)
    assert small.y_len == Fraction(1, 4096)
    assert small.reciprocal() == big
