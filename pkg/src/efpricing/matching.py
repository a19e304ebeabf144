"""Maximum-weight perfect matching on the complete consumer-item graph.

The solver is a dense O(n^3) assignment algorithm: a column-reduction
initialization followed by shortest augmenting paths maintained with
integer row/column potentials (Hungarian method in its Dijkstra form).
It returns the potentials alongside the matching so callers can verify
optimality through the standard dual certificate:

    row_pot[i] + col_pot[j] >= values[i][j]   for all i, j
    row_pot[i] + col_pot[j] == values[i][j]   on matched pairs

which together imply the matching weight equals the potential sum and no
permutation can do better.

A factorial brute-force oracle is provided for cross-checking on small
instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Allocation, InstanceTooLargeError, ValuationMatrix

_INF = 2**62

#: Hard guard for the factorial oracle.
BRUTE_FORCE_LIMIT = 10


@dataclass(frozen=True)
class MatchingResult:
    """An optimal allocation plus the solver's dual potentials.

    dual_potentials is a (row, column) pair of integer vectors when the
    solver emits them (the brute-force oracle does not).
    """

    allocation: Allocation
    dual_potentials: Optional[tuple[np.ndarray, np.ndarray]] = None

    def __post_init__(self):
        if self.dual_potentials is not None:
            for vec in self.dual_potentials:
                vec.flags.writeable = False


def solve_assignment(v: ValuationMatrix) -> MatchingResult:
    """Compute a maximum-weight perfect matching of items to consumers.

    Deterministic: all ties during augmentation are broken toward the
    lowest item index, so a given matrix always yields the same
    allocation and potentials.
    """
    n = v.n
    cost = -v.values  # minimize negated values
    u = np.zeros(n, dtype=np.int64)
    vpot = cost.min(axis=0).astype(np.int64)
    row_of_col = np.full(n, -1, dtype=np.int64)
    col_of_row = np.full(n, -1, dtype=np.int64)

    # Column reduction: match each column to its best row when still free.
    best_rows = np.argmin(cost, axis=0)
    for j in range(n):
        r = best_rows[j]
        if col_of_row[r] == -1:
            col_of_row[r] = j
            row_of_col[j] = r

    for root in np.flatnonzero(col_of_row == -1):
        _augment(cost, u, vpot, row_of_col, col_of_row, int(root))

    allocation = Allocation.from_assignment(v, col_of_row)
    return MatchingResult(
        allocation=allocation,
        dual_potentials=(-u, -vpot),
    )


def _augment(cost, u, vpot, row_of_col, col_of_row, root: int) -> None:
    """Grow an alternating tree from a free row until a free column is
    reached, updating potentials so reduced costs stay nonnegative."""
    n = cost.shape[0]
    minv = np.full(n, _INF, dtype=np.int64)
    # Predecessor column of each column in the tree; n marks the tree root.
    way = np.full(n, n, dtype=np.int64)
    used = np.zeros(n, dtype=bool)
    tree_rows = np.empty(n + 1, dtype=np.int64)
    tree_rows[0] = root
    n_tree = 1

    i0 = root
    j0 = n
    while True:
        cand = cost[i0] - u[i0] - vpot
        upd = ~used & (cand < minv)
        minv[upd] = cand[upd]
        way[upd] = j0
        reachable = np.where(used, _INF, minv)
        j1 = int(np.argmin(reachable))
        delta = reachable[j1]

        u[tree_rows[:n_tree]] += delta
        vpot[used] -= delta
        minv[~used] -= delta

        used[j1] = True
        if row_of_col[j1] == -1:
            break
        i0 = int(row_of_col[j1])
        tree_rows[n_tree] = i0
        n_tree += 1
        j0 = j1

    # Flip matched edges along the alternating path back to the root.
    j = j1
    while True:
        jprev = int(way[j])
        if jprev == n:
            row_of_col[j] = root
            col_of_row[root] = j
            break
        i = int(row_of_col[jprev])
        row_of_col[j] = i
        col_of_row[i] = j
        j = jprev


def brute_force_assignment(v: ValuationMatrix) -> MatchingResult:
    """Exact maximum by enumerating all n! assignments.

    Among equal-weight maxima the lexicographically smallest assignment
    is returned.  Guarded to n <= 10.
    """
    n = v.n
    if n > BRUTE_FORCE_LIMIT:
        raise InstanceTooLargeError(
            f"brute-force enumeration limited to n <= {BRUTE_FORCE_LIMIT}, got {n}"
        )
    rows = np.arange(n)
    perms = itertools.permutations(range(n))
    best_weight = -1
    best = None
    while True:
        chunk = list(itertools.islice(perms, 40320))
        if not chunk:
            break
        block = np.array(chunk, dtype=np.int64)
        weights = v.values[rows, block].sum(axis=1)
        k = int(np.argmax(weights))
        if int(weights[k]) > best_weight:
            best_weight = int(weights[k])
            best = block[k]
    return MatchingResult(allocation=Allocation(assignment=best, weight=best_weight))
