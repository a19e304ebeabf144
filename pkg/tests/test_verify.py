import numpy as np
import pytest

from efpricing import (
    Allocation,
    InstanceTooLargeError,
    PriceVector,
    ValuationMatrix,
    brute_force_max_revenue,
    check_envy_free,
    prices_efpm,
)

from helpers import random_matrix, run_pipeline


def price_vector(values):
    return PriceVector(p=np.array(values, dtype=np.int64), revenue=int(sum(values)))


class TestCheckEnvyFree:
    def test_ties_are_allowed(self):
        v = ValuationMatrix([[5, 4], [1, 2]])
        a = Allocation.from_assignment(v, [0, 1])
        report = check_envy_free(v, a, price_vector([3, 2]))
        assert report.envy_free
        assert report.violations == []
        assert report.negative_utility_consumers == []

    def test_strict_envy_is_flagged(self):
        v = ValuationMatrix([[5, 4], [1, 2]])
        a = Allocation.from_assignment(v, [0, 1])
        report = check_envy_free(v, a, price_vector([4, 2]))
        assert not report.envy_free
        assert report.violations == [(0, 1, 1)]

    def test_negative_utility_is_flagged(self):
        v = ValuationMatrix([[5, 4], [1, 2]])
        a = Allocation.from_assignment(v, [0, 1])
        report = check_envy_free(v, a, price_vector([6, 3]))
        assert not report.envy_free
        assert 0 in report.negative_utility_consumers

    def test_zero_prices_reduce_to_row_argmax(self):
        v = ValuationMatrix([[9, 1], [2, 8]])  # diagonal-dominant
        a = Allocation.from_assignment(v, [0, 1])
        assert check_envy_free(v, a, price_vector([0, 0])).envy_free
        v2 = ValuationMatrix([[1, 9], [2, 8]])
        a2 = Allocation.from_assignment(v2, [0, 1])
        report = check_envy_free(v2, a2, price_vector([0, 0]))
        assert not report.envy_free

    def test_dimension_mismatch(self):
        v = ValuationMatrix([[5, 4], [1, 2]])
        a = Allocation.from_assignment(v, [0, 1])
        with pytest.raises(ValueError, match="sizes"):
            check_envy_free(v, a, price_vector([1, 2, 3]))


class TestBruteForceMaxRevenue:
    def test_worked_examples(self):
        assert brute_force_max_revenue(ValuationMatrix([[5, 4], [1, 2]])) == 5
        assert brute_force_max_revenue(ValuationMatrix([[3, 1], [1, 2]])) == 5

    def test_single_item_prices_at_valuation(self):
        assert brute_force_max_revenue(ValuationMatrix([[13]])) == 13

    def test_size_guard(self):
        with pytest.raises(InstanceTooLargeError):
            brute_force_max_revenue(ValuationMatrix(np.ones((7, 7), dtype=np.int64)))

    def test_huge_valuations_use_exact_arithmetic(self):
        big = 2**60
        v = ValuationMatrix([[big, big - 1], [big - 3, big]])
        # Identity allocation, gaps [[0, -1], [-3, 0]]: utilities stay zero.
        assert brute_force_max_revenue(v) == 2 * big

    def test_pipeline_revenue_matches_oracle(self):
        rng = np.random.default_rng(73)
        for _ in range(200):
            n = int(rng.integers(2, 7))
            hi = int(rng.choice([3, 12, 10**6]))
            v = random_matrix(rng, n, hi)
            _, _, _, _, prices = run_pipeline(v, prices_efpm)
            assert prices.revenue == brute_force_max_revenue(v)

    def test_no_other_allocation_beats_pipeline_revenue(self):
        # The oracle maximizes over every permutation, so equality with the
        # pipeline shows the optimal matching supports the best prices.
        rng = np.random.default_rng(79)
        for _ in range(50):
            v = random_matrix(rng, 5, 30)
            result, _, _, _, prices = run_pipeline(v, prices_efpm)
            oracle = brute_force_max_revenue(v)
            assert prices.revenue == oracle


class TestPipelineEnvyFreeness:
    def test_pipeline_outputs_are_envy_free(self):
        rng = np.random.default_rng(83)
        for _ in range(150):
            n = int(rng.integers(1, 20))
            v = random_matrix(rng, n, int(rng.choice([4, 10**6])))
            result, _, _, _, prices = run_pipeline(v, prices_efpm)
            assert check_envy_free(v, result.allocation, prices).envy_free

    def test_tampered_price_breaks_envy_freeness(self):
        rng = np.random.default_rng(89)
        tampered_caught = 0
        for _ in range(40):
            n = int(rng.integers(2, 10))
            v = random_matrix(rng, n, 1000)
            result, _, _, _, prices = run_pipeline(v, prices_efpm)
            bumped = prices.p.copy()
            j = int(rng.integers(0, n))
            bumped[j] += 1
            report = check_envy_free(v, result.allocation, price_vector(bumped.tolist()))
            if not report.envy_free:
                tampered_caught += 1
        # Raising any single optimal price must always create envy or a
        # negative utility, because minimal utilities leave no slack.
        assert tampered_caught == 40
