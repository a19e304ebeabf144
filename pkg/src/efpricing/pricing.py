"""Revenue-maximizing envy-free prices for an optimal allocation.

Two independent methods compute the same integer price vector:

* :func:`prices_efpm` raises a vector of buyer utilities by repeated
  max-plus sweeps over the utility-gap matrix until it reaches the
  unique minimal stable fixed point.
* :func:`prices_bellman_ford` solves the equivalent shortest-path
  problem on an explicit arc-list network (a virtual source connected to
  every item node, plus one arc per ordered item pair) by synchronous
  relaxation passes; utilities are the negated distances.

Stability means y[j] >= y[k] + gaps[j][k] for all j != k: no item's
winner could gain by taking another item at that item's price.  Prices
are then p[j] = winning_valuation[j] - y[j].

Both methods require the allocation behind the gap matrix to be
welfare-optimal.  On other inputs the gap matrix contains a positive
cycle, the iterates grow forever, and both methods abort with
:class:`NonOptimalAllocation` instead of looping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ReorderedValuation, UtilityGapMatrix


class NonOptimalAllocation(ValueError):
    """The pricing input was not built from an optimal allocation.

    Detected when the utility iteration (or a relaxation pass) is still
    changing after the sweep budget that optimal inputs provably respect.
    The ``sweeps`` attribute records how many sweeps ran before aborting.
    """

    def __init__(self, message: str, sweeps: int):
        super().__init__(message)
        self.sweeps = sweeps


@dataclass(frozen=True)
class UtilityVector:
    """Converged buyer utilities plus the sweep count that produced them.

    At convergence y is the minimal nonnegative stable vector: it is a
    fixed point of the max-plus sweep, at least one entry is zero, and no
    entry can be lowered without breaking stability.
    """

    y: np.ndarray
    iterations_used: int

    def __post_init__(self):
        arr = np.array(self.y, dtype=np.int64)
        if arr.size and arr.min() < 0:
            raise ValueError("utilities must be nonnegative")
        arr.flags.writeable = False
        object.__setattr__(self, "y", arr)


@dataclass(frozen=True)
class PriceVector:
    """Envy-free item prices and the revenue they collect."""

    p: np.ndarray
    revenue: int

    def __post_init__(self):
        arr = np.array(self.p, dtype=np.int64)
        arr.flags.writeable = False
        object.__setattr__(self, "p", arr)
        object.__setattr__(self, "revenue", int(self.revenue))


def iterate_once(u: UtilityGapMatrix, y) -> np.ndarray:
    """One max-plus sweep: y'[j] = max over k of y[k] + gaps[j][k].

    The k = j term contributes y[j] + 0, so the result is pointwise >= y.
    """
    vec = np.asarray(y, dtype=np.int64)
    return (u.gaps + vec[np.newaxis, :]).max(axis=1)


def prices_efpm(
    u: UtilityGapMatrix, vp: ReorderedValuation
) -> tuple[UtilityVector, PriceVector]:
    """Utility-iteration pricing.

    Starts from the row maxima of the gap matrix (the first sweep applied
    to all-zero utilities) and keeps sweeping while any entry grows.  On
    optimal input the loop body runs at most n - 1 times; one extra sweep
    confirms the fixed point.  iterations_used counts the loop body runs.
    """
    _check_sizes(u, vp)
    n = u.n
    gaps = u.gaps
    y = gaps.max(axis=1)
    work = np.empty_like(gaps)
    iterations = 0
    changed = bool((y > 0).any())
    while changed:
        if iterations >= n - 1:
            raise NonOptimalAllocation(
                "utility iteration still rising after its sweep budget; "
                "the input allocation is not revenue-optimal",
                sweeps=iterations + 1,
            )
        np.add(gaps, y[np.newaxis, :], out=work)
        y_next = work.max(axis=1)
        iterations += 1
        changed = not np.array_equal(y_next, y)
        y = y_next
    return _finish(vp, y, iterations)


def prices_bellman_ford(
    u: UtilityGapMatrix, vp: ReorderedValuation
) -> tuple[UtilityVector, PriceVector]:
    """Shortest-path baseline on the pricing network.

    Nodes are a virtual source plus one node per item; the source reaches
    every node at cost zero and each ordered pair (k, j) carries an arc of
    weight -gaps[j][k].  Distances start at zero (source arcs pre-relaxed)
    and every pass relaxes the full arc list; utilities are y = -d.

    A pass that still relaxes after the n - 1 passes sufficient for any
    negative-cycle-free network means a negative cycle is reachable, i.e.
    the allocation was not optimal.
    """
    _check_sizes(u, vp)
    n = u.n
    idx = np.arange(n)
    offdiag = ~np.eye(n, dtype=bool)
    heads = np.repeat(idx, n - 1)
    tails = np.tile(idx, (n, 1))[offdiag]
    weights = (-u.gaps)[offdiag]

    d = np.zeros(n, dtype=np.int64)
    passes = 0
    while True:
        cand = d[tails] + weights
        d_next = d.copy()
        np.minimum.at(d_next, heads, cand)
        if np.array_equal(d_next, d):
            break
        passes += 1
        if passes > n - 1:
            raise NonOptimalAllocation(
                "distances still relaxing after the pass budget; "
                "a negative cycle is reachable, so the input allocation "
                "is not revenue-optimal",
                sweeps=passes,
            )
        d = d_next
    return _finish(vp, -d, passes)


def minimality_certificate(u: UtilityGapMatrix, y: UtilityVector) -> bool:
    """Check that a stable utility vector cannot be lowered anywhere.

    Every entry with y[j] > 0 must be held up by a tight arc
    (y[j] == y[k] + gaps[j][k] for some k != j) and chains of tight arcs
    must bottom out at a zero-utility entry.  Equivalently: following
    tight arcs, every node reaches the zero set.  Returns False as well
    if the vector is not stable at all.
    """
    vec = np.asarray(y.y, dtype=np.int64)
    n = u.n
    gaps = u.gaps
    diff = vec[:, np.newaxis] - vec[np.newaxis, :] - gaps
    if diff.min() < 0:
        return False
    tight = (diff == 0) & ~np.eye(n, dtype=bool)
    reached = vec == 0
    while True:
        grown = reached | (tight & reached[np.newaxis, :]).any(axis=1)
        if np.array_equal(grown, reached):
            break
        reached = grown
    return bool(reached.all())


def _check_sizes(u: UtilityGapMatrix, vp: ReorderedValuation) -> None:
    if u.n != vp.n:
        raise ValueError(f"gap matrix size {u.n} does not match matrix size {vp.n}")


def _finish(vp, y, iterations: int):
    prices = vp.winning_valuations() - y
    utilities = UtilityVector(y=y, iterations_used=iterations)
    return utilities, PriceVector(p=prices, revenue=int(prices.sum()))
