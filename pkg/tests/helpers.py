"""Shared helpers for the test suite."""

import numpy as np

from efpricing import (
    ValuationMatrix,
    build_gap_matrix,
    reorder,
    solve_assignment,
)


def random_matrix(rng, n, hi):
    return ValuationMatrix(rng.integers(0, hi + 1, size=(n, n)))


def run_pipeline(v, pricing_fn):
    """Matching, reorder, gap matrix, then the given pricing method."""
    result = solve_assignment(v)
    vp = reorder(v, result.allocation)
    gaps = build_gap_matrix(vp)
    utilities, prices = pricing_fn(gaps, vp)
    return result, vp, gaps, utilities, prices


def permutation_matrix(assignment):
    """Binary matrix with a one at (consumer, assigned item)."""
    n = len(assignment)
    x = np.zeros((n, n), dtype=np.int64)
    x[np.arange(n), assignment] = 1
    return x
