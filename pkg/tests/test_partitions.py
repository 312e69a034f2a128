"""Tangency predicate, admissibility, greedy construction, coarsening,
tiling, and dyadic blocks."""

import math
import random
from fractions import Fraction

import pytest

from decoup import (
    Interval,
    PolyPhase,
    PreconditionViolated,
    canonical_partition,
    coarsen_pairs,
    count_within_bound,
    dyadic_blocks,
    greedy_partition,
    has_property_p,
    is_admissible,
    is_sub_admissible,
    is_super_admissible,
    refine_partition,
    sup_abs_deriv,
    tile,
    trivial_partition,
)
from decoup.partitions import Partition

S2 = PolyPhase.monomial(2)
S3 = PolyPhase.monomial(3)
LINEAR = PolyPhase([1, Fraction(1, 3)])


def _random_unit_curvature_phase(rng, degree):
    while True:
        phase = PolyPhase([Fraction(rng.randint(-2**16, 2**16), 2**16)
                           for _ in range(degree + 1)])
        sup = sup_abs_deriv(phase, Interval(0, 1), 2)
        if sup.hi == 0:
            continue
        shift = max(0, sup.hi.numerator.bit_length() - sup.hi.denominator.bit_length() + 1)
        return phase.scaled(Fraction(1, 2**shift))


class TestPropertyP:
    def test_parabola_boundary_case(self):
        # deviation sup for s^2 over I is exactly |I|^2; here |I|^2 = 2r
        assert has_property_p(S2, Interval(0, Fraction(1, 4)), Fraction(1, 32), "exact")
        assert not has_property_p(
            S2, Interval(0, Fraction(1, 4) + Fraction(1, 1000)), Fraction(1, 32), "exact")

    def test_linear_always(self):
        assert has_property_p(LINEAR, Interval(0, 1), Fraction(1, 10**9), "exact")
        assert has_property_p(LINEAR, Interval(0, 1), Fraction(1, 10**9), "taylor")

    def test_cubic_unit_interval_fails(self):
        # both orderings of (s, c) count: the deviation sup over [0,1]^2 is 2
        assert not has_property_p(S3, Interval(0, 1), Fraction(1, 10), "exact")
        from decoup.partitions import _deviation_sup_float
        assert abs(_deviation_sup_float(S3, 0.0, 1.0) - 2.0) < 1e-12

    def test_taylor_implies_exact(self):
        rng = random.Random(5)
        for _ in range(40):
            phase = _random_unit_curvature_phase(rng, rng.randint(2, 6))
            lo = Fraction(rng.randint(0, 200), 256)
            hi = lo + Fraction(rng.randint(1, 256 - int(lo * 256)), 256)
            r = Fraction(1, 2 ** rng.randint(4, 14))
            iv = Interval(lo, hi)
            if has_property_p(phase, iv, r, "taylor"):
                assert has_property_p(phase, iv, r, "exact")

    def test_taylor_converse_fails_witness(self):
        # s^3 near the flat point: exact holds but the curvature criterion fails
        r = Fraction(1, 2**12)
        b = Fraction(1, 10)  # deviation sup over [0, b] is 2 b^3 = 2e-3 < 2r? no:
        # pick b with 2 b^3 <= 2r but sup|phi''| b^2 = 6 b^3 > 4r
        b = Fraction(1, 16)  # 2 b^3 = 2^-11 = 2r (boundary true), 6 b^3 = 3*2^-11 > 4r
        iv = Interval(0, b)
        assert has_property_p(S3, iv, r, "exact")
        assert not has_property_p(S3, iv, r, "taylor")


class TestAdmissibility:
    def test_canonical_parabola(self):
        delta = Fraction(1, 256)
        part = canonical_partition(delta)
        assert is_admissible(S2, part, delta, "taylor")
        assert is_admissible(S2, part, delta, "exact")

    def test_trivial_for_linear(self):
        part = trivial_partition(Interval(0, 1), Fraction(1, 64))
        assert is_admissible(LINEAR, part, Fraction(1, 64), "exact")
        finer = refine_partition(part, 4)
        assert is_super_admissible(LINEAR, finer, Fraction(1, 64), "exact")
        assert not is_sub_admissible(LINEAR, finer, Fraction(1, 64), "exact")

    def test_greedy_cubic_admissible(self):
        delta = Fraction(1, 512)
        part = greedy_partition(S3, Interval(0, 1), delta, "exact")
        assert is_admissible(S3, part, delta, "exact")


class TestGreedy:
    def test_parabola_cells(self):
        # exact criterion for s^2: |I|^2 <= 2r, cells of length sqrt(2r)
        r = Fraction(1, 256)
        part = greedy_partition(S2, Interval(0, 1), r, "exact")
        assert part.n_cells == 12
        width = math.sqrt(2 * float(r))
        for a, b in zip(part.cuts[:-2], part.cuts[1:-1]):
            assert abs(float(b - a) - width) < 1e-12

    def test_linear_trivial(self):
        part = greedy_partition(LINEAR, Interval(0, 1), Fraction(1, 1000), "exact")
        assert part.n_cells == 1
        assert part.super_admissible and part.sub_admissible

    def test_cubic_first_cut(self):
        # deviation sup of s^3 over [0, t] is 2 t^3 (attained at s=0, c=t),
        # so the first cut solves 2 t^3 = 2r
        r = Fraction(1, 512)
        part = greedy_partition(S3, Interval(0, 1), r, "exact")
        assert abs(float(part.cuts[1]) - float(r) ** (1 / 3)) < 1e-10

    def test_step_lower_bound(self):
        r = Fraction(1, 2**10)
        part = greedy_partition(S3, Interval(0, 1), r, "exact")
        floor = 2 * math.sqrt(float(r) / 6)
        gaps = [float(b - a) for a, b in zip(part.cuts, part.cuts[1:])]
        assert all(g >= floor * (1 - 1e-9) for g in gaps[:-1])

    def test_taylor_mode_admissible(self):
        rng = random.Random(17)
        for _ in range(5):
            phase = _random_unit_curvature_phase(rng, 5)
            r = Fraction(1, 2**10)
            part = greedy_partition(phase, Interval(0, 1), r, "taylor")
            assert is_super_admissible(phase, part, r, "taylor")
            assert is_sub_admissible(phase, part, r, "taylor")

    def test_monotone_coarsening_stays_subadmissible(self):
        rng = random.Random(23)
        r = Fraction(1, 2**9)
        part = greedy_partition(S3, Interval(0, 1), r, "exact")
        for _ in range(5):
            # random nontrivial coarsening: keep a sorted subset of cuts
            keep = sorted(rng.sample(range(1, part.n_cells),
                                     k=max(1, part.n_cells // 2)))
            cuts = (part.cuts[0],) + tuple(part.cuts[i] for i in keep) + (part.cuts[-1],)
            coarse = Partition(part.base, cuts, r)
            assert is_sub_admissible(S3, coarse, r, "exact")


class TestCoarsenAndCount:
    def test_canonical_pairs(self):
        delta = Fraction(1, 256)
        part = canonical_partition(delta)
        paired = coarsen_pairs(part, S2, delta, "taylor")
        assert paired.n_cells == 8
        floor = 2 * math.sqrt(float(delta) / 2)
        assert all(float(b - a) >= floor * (1 - 1e-12)
                   for a, b in zip(paired.cuts, paired.cuts[1:]))

    def test_trivial_unchanged(self):
        part = trivial_partition(Interval(0, 1), Fraction(1, 64))
        assert coarsen_pairs(part, LINEAR, Fraction(1, 64)) is part

    def test_odd_cell_count(self):
        cuts = tuple(Fraction(k, 5) for k in range(6))
        part = Partition(Interval(0, 1), cuts, Fraction(1, 100), sub_admissible=True)
        paired = coarsen_pairs(part, S2, Fraction(1, 100))
        assert paired.cuts == (0, Fraction(2, 5), Fraction(4, 5), 1)

    def test_count_bound(self):
        delta = Fraction(1, 256)
        part = greedy_partition(S2, Interval(0, 1), delta, "exact")
        assert part.n_cells == 12
        assert count_within_bound(part, S2, delta)  # 12 <= 16 sqrt(2) + 1
        part3 = greedy_partition(S3, Interval(0, 1), Fraction(1, 2**12), "exact")
        assert count_within_bound(part3, S3, Fraction(1, 2**12))

    def test_trivial_count(self):
        part = trivial_partition(Interval(0, 1), Fraction(1, 64))
        assert count_within_bound(part, S2, Fraction(1, 64))


class TestTile:
    def test_width_selection(self):
        res = tile([Interval(0, Fraction(1, 20))], Fraction(1, 20))
        assert res.l == Fraction(1, 4)
        assert float(res.l / Fraction(1, 20)) == 5.0

    def test_quarter(self):
        res = tile([Interval(0, Fraction(1, 4))], Fraction(1, 4))
        assert res.l == 1

    def test_abutting_chain(self):
        step = Fraction(1, 20)
        intervals = [Interval(k * step, (k + 1) * step) for k in range(16)]
        res = tile(intervals, step)
        assert sorted(res.u1 + res.u2) == list(range(16))
        counts = res.counts()
        assert max(counts.values()) <= 5
        for idx, (family, j) in res.cell_map.items():
            cell = (Interval((j - 1) * res.l, j * res.l) if family == 1
                    else Interval((j - Fraction(1, 2)) * res.l,
                                  (j + Fraction(1, 2)) * res.l))
            assert cell.contains_interval(intervals[idx])

    def test_preconditions(self):
        with pytest.raises(PreconditionViolated):
            tile([Interval(0, Fraction(1, 2))], Fraction(1, 20))  # too long
        with pytest.raises(PreconditionViolated):
            tile([Interval(0, Fraction(1, 20)),
                  Interval(Fraction(1, 40), Fraction(3, 40))], Fraction(1, 20))

    def test_random_valid_inputs(self):
        rng = random.Random(99)
        for _ in range(25):
            l0 = Fraction(1, rng.choice([8, 16, 25, 40]))
            pos = Fraction(0)
            intervals = []
            while True:
                gap = Fraction(rng.randint(0, 8), 64) * l0
                length = l0 + Fraction(rng.randint(0, 16), 16) * l0
                if pos + gap + length > 1:
                    break
                intervals.append(Interval(pos + gap, pos + gap + length))
                pos += gap + length
            if not intervals:
                continue
            res = tile(intervals, l0)
            assert sorted(res.u1 + res.u2) == list(range(len(intervals)))
            assert 4 <= res.l / l0 < 8
            assert max(res.counts().values()) < 8


class TestDyadicBlocks:
    def test_two_blocks(self):
        blocks = dyadic_blocks(Fraction(1, 16), 3)
        assert [b.n for b in blocks] == [1, 2]
        b2 = blocks[1]
        assert b2.cells.cuts == (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
        assert b2.scale == 1

    def test_single_block(self):
        blocks = dyadic_blocks(Fraction(1, 4), 3)
        assert len(blocks) == 1
        assert blocks[0].scale == 1
        assert blocks[0].sub_admissible_exact  # single cell: vacuous

    def test_block_reports(self):
        # curvature comparison predicts failure exactly when 2^(2n) > d(d-1)
        blocks = dyadic_blocks(Fraction(1, 256), 3)
        assert len(blocks) == 4
        for b in blocks:
            expected = not (2 ** (2 * b.n) > 6) or b.cells.n_cells == 1
            assert b.sub_admissible_taylor == expected

    def test_bad_delta(self):
        with pytest.raises(ValueError):
            dyadic_blocks(Fraction(1, 3), 3)
        with pytest.raises(ValueError):
            dyadic_blocks(Fraction(1, 8), 3)  # sqrt not exact
