"""Assigning voters to a fixed committee.

Under the best-representative rule each voter simply gets her cheapest
committee member (ties to the lowest candidate index), which is optimal for
both objectives and may leave committee members without voters.  Under the
balanced rule the optimal assignment is a minimum-cost flow in which every
winner must receive between floor(n/k) and ceil(n/k) voters; the minimax
variant restricts the flow to arcs within the bound and asks only for
feasibility.

``enumerate_balanced_assignments`` is the independent oracle against which
the flow-based routines are tested; it is deliberately naive and guarded.
"""

from __future__ import annotations

from typing import Iterator

from .core import (
    Assignment,
    BudgetExceededError,
    MisrepMatrix,
    Objective,
    Solution,
    balanced_loads,
    evaluate,
)
from .flows import feasible_min_cost


def assign_cc(winner_set: tuple[int, ...], matrix: MisrepMatrix) -> Assignment:
    """Map every voter to her best winner, ties to the lowest index."""
    winners = tuple(sorted(winner_set))
    mapping = []
    for row in matrix.rows:
        best = winners[0]
        for w in winners[1:]:
            if row[w] < row[best]:
                best = w
        mapping.append(best)
    return Assignment(winners, tuple(mapping))


def cc_value(
    matrix: MisrepMatrix, winner_set: tuple[int, ...], objective: Objective
) -> int:
    """Committee value under the best-representative rule, without the map."""
    per_voter = (min(row[w] for w in winner_set) for row in matrix.rows)
    if objective is Objective.SUM:
        return sum(per_voter)
    return max(per_voter)


def _monroe_arcs(
    winner_set: tuple[int, ...],
    matrix: MisrepMatrix,
    bound: int | None,
) -> tuple[int, list[tuple[int, int, int, int, int]], int, int]:
    """Flow network for balanced assignments; arcs over the bound are dropped."""
    k = len(winner_set)
    n = matrix.n
    low, high, _ = balanced_loads(n, k)
    source = 0
    sink = 1 + k + n
    arcs = []
    for i in range(k):
        arcs.append((source, 1 + i, low, high, 0))
    for i, w in enumerate(winner_set):
        for v in range(n):
            cost = matrix.rows[v][w]
            if bound is not None and cost > bound:
                continue
            arcs.append((1 + i, 1 + k + v, 0, 1, cost))
    for v in range(n):
        arcs.append((1 + k + v, sink, 0, 1, 0))
    return 2 + k + n, arcs, source, sink


def _mapping_from_flows(
    winner_set: tuple[int, ...],
    matrix: MisrepMatrix,
    arcs: list[tuple[int, int, int, int, int]],
    flows: list[int],
) -> tuple[int, ...]:
    k = len(winner_set)
    n = matrix.n
    mapping = [-1] * n
    for arc, flow in zip(arcs, flows):
        tail, head, _, _, _ = arc
        if flow > 0 and 1 <= tail <= k and 1 + k <= head < 1 + k + n:
            mapping[head - 1 - k] = winner_set[tail - 1]
    return tuple(mapping)


def assign_monroe_sum(
    winner_set: tuple[int, ...], matrix: MisrepMatrix
) -> Solution:
    """Cheapest balanced assignment of all voters to the given committee."""
    winners = tuple(sorted(winner_set))
    num_nodes, arcs, source, sink = _monroe_arcs(winners, matrix, None)
    result = feasible_min_cost(num_nodes, arcs, source, sink, matrix.n)
    if result is None:
        raise ValueError("balanced assignment infeasible; need k <= n")
    cost, flows = result
    mapping = _mapping_from_flows(winners, matrix, arcs, flows)
    assignment = Assignment(winners, mapping)
    return Solution(assignment, cost, True)


def assign_monroe_minimax(
    winner_set: tuple[int, ...], matrix: MisrepMatrix, bound: int
) -> Assignment | None:
    """A balanced assignment whose every entry is within the bound, if any."""
    winners = tuple(sorted(winner_set))
    num_nodes, arcs, source, sink = _monroe_arcs(winners, matrix, bound)
    result = feasible_min_cost(num_nodes, arcs, source, sink, matrix.n)
    if result is None:
        return None
    _, flows = result
    mapping = _mapping_from_flows(winners, matrix, arcs, flows)
    return Assignment(winners, mapping)


def monroe_minimax_value(
    matrix: MisrepMatrix, winner_set: tuple[int, ...]
) -> tuple[int, Assignment]:
    """Smallest bound admitting a balanced assignment for this committee."""
    values = sorted({matrix.rows[v][w] for v in range(matrix.n) for w in winner_set})
    lo, hi = 0, len(values) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        attempt = assign_monroe_minimax(winner_set, matrix, values[mid])
        if attempt is not None:
            best = attempt
            hi = mid - 1
        else:
            lo = mid + 1
    assert best is not None, "maximal bound is always feasible when k <= n"
    return evaluate(matrix, best.mapping, Objective.MINIMAX), best


def enumerate_balanced_assignments(
    winner_set: tuple[int, ...], n: int
) -> Iterator[tuple[int, ...]]:
    """Yield every balanced voter-to-winner map, voters in index order.

    Oracle helper: exponential in n, guarded at n <= 10.
    """
    if n > 10:
        raise BudgetExceededError(
            f"balanced-assignment enumeration capped at n <= 10, got {n}"
        )
    winners = tuple(sorted(winner_set))
    low, high, _ = balanced_loads(n, len(winners))
    mapping = [-1] * n
    taken = {w: 0 for w in winners}

    def generate(voter: int) -> Iterator[tuple[int, ...]]:
        if voter == n:
            yield tuple(mapping)
            return
        left = n - voter
        for w in winners:
            if taken[w] >= high:
                continue
            # Prune branches that can no longer fill every winner to `low`.
            shortfall = sum(max(0, low - taken[x]) for x in winners)
            if taken[w] < low:
                shortfall -= 1
            if shortfall > left - 1:
                continue
            mapping[voter] = w
            taken[w] += 1
            yield from generate(voter + 1)
            taken[w] -= 1
        mapping[voter] = -1

    yield from generate(0)
