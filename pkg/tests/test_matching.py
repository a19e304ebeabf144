import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from efpricing import (
    InstanceTooLargeError,
    ValuationMatrix,
    brute_force_assignment,
    solve_assignment,
)

from helpers import random_matrix


def test_two_by_two_prefers_diagonal():
    res = solve_assignment(ValuationMatrix([[3, 1], [1, 2]]))
    assert res.allocation.assignment.tolist() == [0, 1]
    assert res.allocation.weight == 5


def test_two_by_two_prefers_swap():
    res = solve_assignment(ValuationMatrix([[0, 10], [10, 0]]))
    assert res.allocation.assignment.tolist() == [1, 0]
    assert res.allocation.weight == 20


def test_constant_matrix_returns_valid_permutation():
    n = 6
    res = solve_assignment(ValuationMatrix(np.full((n, n), 3)))
    assert sorted(res.allocation.assignment.tolist()) == list(range(n))
    assert res.allocation.weight == n * 3
    # Low-index tie-breaking makes the all-ties outcome the identity.
    assert res.allocation.assignment.tolist() == list(range(n))


def test_single_item():
    res = solve_assignment(ValuationMatrix([[7]]))
    assert res.allocation.assignment.tolist() == [0]
    assert res.allocation.weight == 7


def test_deterministic_across_calls():
    rng = np.random.default_rng(23)
    v = random_matrix(rng, 40, 5)  # small value range forces many ties
    first = solve_assignment(v)
    second = solve_assignment(v)
    assert np.array_equal(first.allocation.assignment, second.allocation.assignment)
    rp1, cp1 = first.dual_potentials
    rp2, cp2 = second.dual_potentials
    assert np.array_equal(rp1, rp2) and np.array_equal(cp1, cp2)


def test_brute_force_examples():
    assert brute_force_assignment(ValuationMatrix([[3, 1], [1, 2]])).allocation.weight == 5
    assert brute_force_assignment(ValuationMatrix([[7]])).allocation.weight == 7


def test_brute_force_breaks_ties_lexicographically():
    res = brute_force_assignment(ValuationMatrix(np.full((4, 4), 2)))
    assert res.allocation.assignment.tolist() == [0, 1, 2, 3]


def test_brute_force_size_guard():
    v = ValuationMatrix(np.ones((11, 11), dtype=np.int64))
    with pytest.raises(InstanceTooLargeError):
        brute_force_assignment(v)


def test_weights_match_brute_force_oracle():
    rng = np.random.default_rng(31)
    for _ in range(250):
        n = int(rng.integers(2, 9))
        hi = int(rng.choice([2, 10, 1000, 10**6]))
        v = random_matrix(rng, n, hi)
        fast = solve_assignment(v)
        exact = brute_force_assignment(v)
        assert fast.allocation.weight == exact.allocation.weight
        assert sorted(fast.allocation.assignment.tolist()) == list(range(n))


def test_weights_match_scipy_on_larger_instances():
    rng = np.random.default_rng(37)
    for n in (25, 60, 120):
        for _ in range(5):
            v = random_matrix(rng, n, 10**6)
            res = solve_assignment(v)
            r, c = linear_sum_assignment(v.values, maximize=True)
            assert res.allocation.weight == int(v.values[r, c].sum())


def test_dual_certificate():
    rng = np.random.default_rng(41)
    for _ in range(100):
        n = int(rng.integers(1, 30))
        v = random_matrix(rng, n, int(rng.choice([3, 10**6])))
        res = solve_assignment(v)
        row_pot, col_pot = res.dual_potentials
        # Feasible everywhere, tight on matched pairs, and summing to the weight.
        assert np.all(row_pot[:, None] + col_pot[None, :] >= v.values)
        a = res.allocation.assignment
        assert np.all(row_pot + col_pot[a] == v.values[np.arange(n), a])
        assert int(row_pot.sum() + col_pot.sum()) == res.allocation.weight
