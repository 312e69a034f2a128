"""Decoupling-ratio estimation, the mean-value oracle, bad-set splitting."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from decoup import (
    Interval,
    NotSubAdmissible,
    PolyPhase,
    SublevelParams,
    TrialSpec,
    bad_set,
    calibrate_const,
    canonical_partition,
    coarsen_pairs,
    decoupling_ratio,
    decoupling_ratios,
    default_grid,
    greedy_partition,
    mean_value_count,
    refine_partition,
    split_by_badset,
    trivial_partition,
)
from decoup.phases import BadSet

S2 = PolyPhase.monomial(2)
S3 = PolyPhase.monomial(3)


class TestDecouplingRatio:
    def test_trivial_partition_unit_ratio(self):
        delta = Fraction(1, 16)
        part = trivial_partition(Interval(0, 1), delta)
        rep = decoupling_ratio(S2, part, 4.0, delta, trials=3, seed=1)
        assert all(r == pytest.approx(1.0, abs=1e-12) for r in rep.ratios)

    def test_plancherel(self):
        delta = Fraction(1, 64)
        part = canonical_partition(delta)
        rep = decoupling_ratio(S2, part, 2.0, delta, trials=6, seed=2)
        assert all(abs(r - 1) < 1e-10 for r in rep.ratios)

    def test_deterministic_given_seed(self):
        delta = Fraction(1, 64)
        part = canonical_partition(delta)
        r1 = decoupling_ratio(S2, part, 6.0, delta, trials=4, seed=5)
        r2 = decoupling_ratio(S2, part, 6.0, delta, trials=4, seed=5)
        assert r1.ratios == r2.ratios
        r3 = decoupling_ratio(S2, part, 6.0, delta, trials=4, seed=6)
        assert r1.ratios != r3.ratios

    def test_subadmissibility_checked(self):
        delta = Fraction(1, 256)
        fine = refine_partition(canonical_partition(delta), 4)
        with pytest.raises(NotSubAdmissible):
            decoupling_ratio(S2, fine, 6.0, delta, trials=1, seed=0)

    def test_negative_control_exceeds_baseline(self):
        # the canonical partition is finer than sub-admissible for s^3 near
        # the flat point; its ratio should exceed the greedy baseline
        delta = Fraction(1, 256)
        grid = default_grid(S3, delta)
        spec = TrialSpec(model="ones")
        fine = decoupling_ratio(S3, canonical_partition(delta), 6.0, delta,
                                trials=1, spec=spec, seed=0, grid=grid, check=False)
        base = decoupling_ratio(S3, greedy_partition(S3, Interval(0, 1), delta, "exact"),
                                6.0, delta, trials=1, spec=spec, seed=0, grid=grid)
        assert fine.max_ratio > base.max_ratio

    def test_coarsening_ratio_drop_bounded(self):
        # per trial the ratio drops by at most sqrt(2) per merge level
        delta = Fraction(1, 256)
        part = canonical_partition(delta)
        paired = coarsen_pairs(part, S2, delta, "taylor")
        grid = default_grid(S2, delta)
        for p in (4.0, 6.0):
            fine = decoupling_ratio(S2, part, p, delta, trials=5, seed=3, grid=grid)
            coarse = decoupling_ratio(S2, paired, p, delta, trials=5, seed=3, grid=grid)
            for rf, rc in zip(fine.ratios, coarse.ratios):
                assert rc >= rf / math.sqrt(2) * (1 - 1e-12)

    def test_multi_p_consistency(self):
        delta = Fraction(1, 64)
        part = canonical_partition(delta)
        multi = decoupling_ratios(S2, part, (2.0, 6.0), delta, trials=3, seed=11)
        single = decoupling_ratio(S2, part, 6.0, delta, trials=3, seed=11)
        assert multi[6.0].ratios == single.ratios

    def test_gaussian_model(self):
        delta = Fraction(1, 64)
        part = canonical_partition(delta)
        rep = decoupling_ratio(S2, part, 2.0, delta, trials=4, seed=8,
                               spec=TrialSpec(model="gaussian"))
        assert all(abs(r - 1) < 1e-10 for r in rep.ratios)


class TestMeanValueCount:
    def test_diagonal_only(self):
        assert mean_value_count(4, 2, 2) == 28  # 2 N^2 - N
        assert mean_value_count(1, 2, 2) == 1
        assert mean_value_count(4, 3, 2) == 28

    def test_brute_force_oracle(self):
        for n, d in ((4, 2), (5, 2), (4, 3)):
            count = 0
            for t in itertools.product(range(1, n + 1), repeat=4):
                if t[0] + t[1] == t[2] + t[3] and t[0] ** d + t[1] ** d == t[2] ** d + t[3] ** d:
                    count += 1
            assert mean_value_count(n, d, 2) == count

    def test_triples(self):
        n, d = 4, 2
        count = 0
        for t in itertools.product(range(1, n + 1), repeat=6):
            if (t[0] + t[1] + t[2] == t[3] + t[4] + t[5]
                    and sum(x**d for x in t[:3]) == sum(x**d for x in t[3:])):
                count += 1
        assert mean_value_count(n, d, 3) == count

    def test_budget(self):
        from decoup import BudgetExceeded
        with pytest.raises(BudgetExceeded):
            mean_value_count(256, 2, 2)
        with pytest.raises(BudgetExceeded):
            mean_value_count(16, 2, 4)


class TestSplitByBadset:
    def _partition(self):
        return canonical_partition(Fraction(1, 256))

    def test_empty_badset(self):
        part = self._partition()
        b = BadSet(Interval(0, 1), (), Fraction(0))
        split = split_by_badset(part, b)
        assert split.inside == () and split.straddle == ()
        assert split.outside == tuple(range(part.n_cells))

    def test_full_badset(self):
        part = self._partition()
        b = BadSet(Interval(0, 1), (Interval(0, 1),), Fraction(1))
        split = split_by_badset(part, b)
        assert split.inside == tuple(range(part.n_cells))
        assert split.outside == () and split.straddle == ()

    def test_left_edge_component(self):
        part = self._partition()
        b = BadSet(Interval(0, 1), (Interval(0, Fraction(1, 50)),), Fraction(1, 50))
        split = split_by_badset(part, b)
        assert split.inside == ()
        assert split.straddle == (0,)
        assert split.outside == tuple(range(1, part.n_cells))

    def test_straddler_bound_on_real_badset(self):
        phase = PolyPhase([0, 0, Fraction(-1, 4), Fraction(1, 6), Fraction(1, 24)])
        b = bad_set(phase, Interval(0, 1), SublevelParams(2, 16.0, Fraction(1, 5000)))
        part = self._partition()
        split = split_by_badset(part, b)
        assert len(split.straddle) <= 2 * b.count
        assert set(split.inside + split.outside + split.straddle) == set(
            range(part.n_cells))


def test_calibrate_const_smoke():
    rng = np.random.default_rng(4)
    phases = [PolyPhase([Fraction(int(c), 64) for c in rng.integers(-64, 64, size=6)])
              for _ in range(10)]
    res = calibrate_const(phases, 3, samples_per_phase=5, seed=1)
    assert res.suggested_const >= 2.0
    assert res.max_components <= res.suggested_const
