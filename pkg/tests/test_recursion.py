"""Exact unrolling of the two induction-on-scales recursions."""

import math
from fractions import Fraction

import pytest

from decoup import PowTerm, geometric_exponent_sum, iterate_nonzero, unroll_main


class TestUnrollMain:
    def test_cube_of_m(self):
        t = unroll_main(2, Fraction(1, 2), 1, Fraction(1, 36**3))
        assert t.params["M"] == pytest.approx(36.0)
        assert t.params["n"] == 3
        assert t.verified
        # stepwise bound K^n + n K^n C delta^-eps = 8 + 3*8*216 = 5192
        assert t.params["stepwise_bound"] == pytest.approx(8 + 3 * 8 * 216.0)
        # closed form 3KC delta^-2eps = 6 * 36^3
        assert t.closed_form_value == pytest.approx(6 * 36**3)

    def test_delta_one(self):
        t = unroll_main(2, Fraction(1, 2), 1, 1)
        assert t.params["n"] == 0
        assert t.verified
        assert t.terminal_scale == pytest.approx(1.0)

    def test_one_step(self):
        t = unroll_main(2, Fraction(1, 2), 1, Fraction(1, 36))
        assert t.params["n"] == 1
        assert t.verified
        # D <= K S(1) + K C delta^-eps = 2 + 2 * 6 <= 6 C delta^-eps = 36
        assert t.params["stepwise_bound"] == pytest.approx(2 + 2 * 6.0)
        assert t.closed_form_value == pytest.approx(6 * 36.0)

    def test_scales_increase(self):
        t = unroll_main(3, Fraction(1, 3), 2, Fraction(1, 2**20))
        scales = [s.scale for s in t.steps]
        assert all(a < b or b >= 1.0 for a, b in zip(scales, scales[1:]))
        assert t.terminal_scale >= 1.0
        assert t.verified

    def test_exact_verification_over_dyadics(self):
        for k in range(2, 33):
            t = unroll_main(2, Fraction(1, 2), 1, Fraction(1, 2 ** (2 * k)))
            assert t.verified, (k, t.checks)
            ti = iterate_nonzero(Fraction(1, 2 ** (2 * k)))
            assert ti.verified, (k, ti.checks)


class TestIterateNonzero:
    def test_chain_two_sixteen(self):
        t = iterate_nonzero(Fraction(1, 2**16))
        scales = [s.scale for s in t.steps]
        assert scales == [2**-16, 2**-10, 2**-6, 2**-4, 2**-2]
        assert t.params["n"] == 4
        assert t.verified

    def test_chain_short(self):
        t = iterate_nonzero(Fraction(1, 16))
        assert [s.scale for s in t.steps] == [2**-4, 2**-2]
        assert t.params["n"] == 1

    def test_just_below_terminal(self):
        eps = Fraction(1, 2**50)
        t = iterate_nonzero(Fraction(1, 4) - eps)
        assert t.params["n"] == 1
        assert t.steps[-1].scale == 0.25
        assert t.verified

    def test_loglog_bound_over_range(self):
        for k in range(2, 65):
            t = iterate_nonzero(Fraction(1, 2 ** (2 * k)))
            n = t.params["n"]
            bound = 1 + (math.log(math.log(2 ** (2 * k))) - math.log(math.log(4))) / math.log(1.5)
            assert n < bound or n == 1
            assert t.verified

    def test_rejects_large_delta(self):
        with pytest.raises(ValueError):
            iterate_nonzero(Fraction(1, 2))


class TestGeometricSum:
    def test_values(self):
        assert geometric_exponent_sum(0) == 0
        assert geometric_exponent_sum(1) == 1
        assert geometric_exponent_sum(5) == Fraction(211, 81)

    def test_stays_below_three(self):
        for n in range(0, 60):
            assert geometric_exponent_sum(n) < 3


class TestPowTerm:
    def test_comparisons_match_floats(self):
        base = Fraction(1024)
        import itertools, random
        rng = random.Random(3)
        for _ in range(50):
            a = PowTerm(base, Fraction(rng.randint(1, 50), rng.randint(1, 50)),
                        Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
            b = PowTerm(base, Fraction(rng.randint(1, 50), rng.randint(1, 50)),
                        Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
            fa, fb = float(a), float(b)
            if abs(fa - fb) > 1e-9 * max(fa, fb):
                assert a.le(b) == (fa <= fb)

    def test_nested_log_dominated_by_power(self):
        # (log 1/delta)^(C log C_em) <= C' delta^-eps over the tested range
        c_em, big_c, eps = 4.0, 2.0, 0.5
        worst = 0.0
        for k in range(2, 65):
            delta = 2.0 ** (-2 * k)
            lhs = math.log(1 / delta) ** (big_c * math.log(c_em))
            worst = max(worst, lhs * delta**eps)
        assert worst < 50.0
