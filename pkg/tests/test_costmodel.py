"""Operation-count models: exact arithmetic, printed bounds, trends."""

from fractions import Fraction
from math import comb, factorial

import pytest

from taylorfd.costmodel import (approx_cost, rational_cost_ratio,
                                rational_cost_vector, taylor_cost,
                                taylor_cost_lower)


def brute_force_taylor_cost(m, order, c):
    """Term-by-term re-summation with binomials built from factorials."""
    total = 0
    for r in range(order):
        distinct = factorial(m + r - 1) // (factorial(r) * factorial(m - 1))
        total += r * m ** r + distinct * (c[r] + 1)
    return m * total


class TestTaylorCost:
    def test_single_order_term(self):
        for m, c0 in [(1, 0), (3, 5), (7, 2)]:
            assert taylor_cost(m, 1, [c0]) == m * (c0 + 1)

    def test_scalar_case_magnitude(self):
        # For m=1 with free derivatives the exact sum is R(R+1)/2, i.e. the
        # published ~R^2 approximation up to a factor ~2.
        for order in (4, 8, 12, 16):
            got = taylor_cost(1, order, [0] * order)
            assert got == order * (order + 1) // 2
            assert 0.4 * order ** 2 <= got <= 1.1 * order ** 2

    def test_scalar_case_with_costs(self):
        order = 6
        c = [3, 1, 4, 1, 5, 9]
        assert taylor_cost(1, order, c) == order * (order + 1) // 2 + sum(c)

    def test_matches_brute_force(self):
        for m, order in [(6, 6), (4, 8), (2, 5)]:
            c = rational_cost_vector(m, order)
            assert taylor_cost(m, order, c) == brute_force_taylor_cost(m, order, c)

    def test_validation(self):
        with pytest.raises(ValueError):
            taylor_cost(0, 2, [0, 0])
        with pytest.raises(ValueError):
            taylor_cost(2, 3, [0, 0])
        with pytest.raises(ValueError):
            taylor_cost(2, 2, [0, -1])


class TestLowerBound:
    def test_hand_expanded_case(self):
        # m=2, R=2, c=(0,0): (R-1) m^R + m [C(1,0)*1 + C(2,1)*1] = 4 + 6 = 10
        assert taylor_cost_lower(2, 2, [0, 0]) == 10

    def test_m1_rejected(self):
        with pytest.raises(ValueError):
            taylor_cost_lower(1, 2, [0, 0])

    def test_never_exceeds_full_model(self):
        for m in (2, 3, 6, 16):
            for order in range(2, 10):
                c = rational_cost_vector(m, order)
                assert taylor_cost(m, order, c) >= taylor_cost_lower(m, order, c)

    def test_wide_integers(self):
        c = rational_cost_vector(64, 12)
        assert taylor_cost_lower(64, 12, c) > 2 ** 63  # would overflow fixed width


class TestApproxCost:
    def test_minimal(self):
        assert approx_cost(1, 1, 0) == 4

    def test_rational_instance(self):
        assert approx_cost(6, 6, 24) == 6 * 36 * 28 == 6048

    def test_quadratic_in_order(self):
        assert approx_cost(3, 8, 5) == 4 * approx_cost(3, 4, 5)


class TestCostRatio:
    def test_cost_vector(self):
        assert rational_cost_vector(6, 5) == [24, 3, 4, 6, 8]

    def test_ratio_value(self):
        r = rational_cost_ratio(2, 3)
        c = rational_cost_vector(2, 3)
        assert r.q == Fraction(taylor_cost_lower(2, 3, c), approx_cost(2, 3, c[0]))

    def test_printed_chain_and_corrected_reading(self):
        # The corrected middle expression (reading "(4m+1)" for the printed
        # "4(m+1)") equals q exactly; the literal middle overshoots q by
        # exactly 3/(4 (m+1) R^2); the final printed bound always holds.
        for m in (2, 4, 16, 64):
            for order in (3, 6, 12):
                r = rational_cost_ratio(m, order)
                assert r.corrected_full == r.q
                assert r.lower_full - r.q == Fraction(3, 4 * (m + 1) * order * order)
                assert r.lower_full >= r.lower_simple
                assert r.q >= r.lower_simple

    def test_monotone_in_dimension(self):
        vals = [rational_cost_ratio(m, 6).q for m in range(4, 65)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_monotone_in_order(self):
        vals = [rational_cost_ratio(6, order).q for order in range(4, 13)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_doubles_over_dimension_decade(self):
        # Coarse proxy for divergence as m grows, at fixed order >= 4.
        for order in (4, 6, 8):
            assert rational_cost_ratio(40, order).q >= 2 * rational_cost_ratio(4, order).q

    def test_scalar_case_runs_without_claim(self):
        r = rational_cost_ratio(1, 4)
        assert r.q > 0  # no advantage asserted either way
