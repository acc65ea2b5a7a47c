"""Exact solvers for proportional-representation committee selection.

Two families live here.  The enumeration solvers (`solve_subset_enum`,
`solve_partition_enum`) try every committee or every voter partition and are
the reference oracles for everything else.  The remaining solvers are
decision procedures: given the bound stored on the instance they either
produce a witness solution meeting it or report that none exists by
returning ``None``.  `optimize` turns any decision solver into an optimizer
by binary search over candidate bounds.

All solvers are pure functions of their arguments.  Subset enumeration is
organized as chunk evaluation plus an order-independent merge, so chunks may
be scored concurrently without changing the result.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .assignment import (
    assign_cc,
    assign_monroe_sum,
    cc_value,
    monroe_minimax_value,
)
from .core import (
    Assignment,
    BudgetExceededError,
    MisrepMatrix,
    Objective,
    ProblemInstance,
    Rule,
    Solution,
    balanced_loads,
    check_m_criterion,
    evaluate,
)
from .flows import feasible_min_cost


@dataclass(frozen=True)
class SolverBudget:
    """Resource caps for the exhaustive solvers.

    A solver never silently degrades to a heuristic: it either finishes
    within these caps or raises `BudgetExceededError`.
    """

    max_subset_candidates: int = 20
    max_partition_voters: int = 9
    max_constant_bound: int = 3
    max_seconds: Optional[float] = None


DEFAULT_BUDGET = SolverBudget()


@dataclass
class SearchStats:
    """Mutable counters filled in by the branching solvers.

    `leaf_calls` counts recursive calls that return without branching
    further; it is the quantity bounded by the search-tree analysis.
    """

    leaf_calls: int = 0


class _Deadline:
    def __init__(self, budget: SolverBudget):
        self._limit = budget.max_seconds
        self._start = time.monotonic()

    def check(self) -> None:
        if self._limit is not None and time.monotonic() - self._start > self._limit:
            raise BudgetExceededError("wall-clock budget exhausted")


def _pad_committee(winners: Iterable[int], k: int, m: int) -> tuple[int, ...]:
    """Extend a winner set to exactly k members.

    Extra seats go to the smallest-index candidates not already chosen;
    under the evaluation rules used here extra committee members can only
    help, never hurt.
    """
    chosen = set(winners)
    for c in range(m):
        if len(chosen) >= k:
            break
        chosen.add(c)
    if len(chosen) != k:
        raise ValueError("cannot pad committee to size k")
    return tuple(sorted(chosen))


def _committee_solution(instance: ProblemInstance, winners: Sequence[int]) -> Solution:
    """Build the best solution for a fixed committee under the instance's rule."""
    matrix = instance.matrix
    winners = tuple(sorted(winners))
    if instance.rule is Rule.CC:
        assignment = assign_cc(winners, matrix)
        value = evaluate(matrix, assignment.mapping, instance.objective)
        balanced = check_m_criterion(assignment, matrix.n, instance.k)
        return Solution(assignment, value, balanced)
    if instance.objective is Objective.SUM:
        return assign_monroe_sum(winners, matrix)
    value, assignment = monroe_minimax_value(matrix, winners)
    return Solution(assignment, value, True)


def _committee_scorer(instance: ProblemInstance) -> Callable[[tuple[int, ...]], int]:
    matrix = instance.matrix
    if instance.rule is Rule.CC:
        objective = instance.objective
        return lambda committee: cc_value(matrix, committee, objective)
    if instance.objective is Objective.SUM:
        return lambda committee: assign_monroe_sum(committee, matrix).objective_value
    return lambda committee: monroe_minimax_value(matrix, committee)[0]


def best_committee(
    committees: Iterable[tuple[int, ...]],
    scorer: Callable[[tuple[int, ...]], int],
) -> Optional[tuple[int, tuple[int, ...]]]:
    """Score one chunk of committees; return the (value, committee) minimum."""
    best: Optional[tuple[int, tuple[int, ...]]] = None
    for committee in committees:
        entry = (scorer(committee), committee)
        if best is None or entry < best:
            best = entry
    return best


def merge_best(
    left: Optional[tuple[int, tuple[int, ...]]],
    right: Optional[tuple[int, tuple[int, ...]]],
) -> Optional[tuple[int, tuple[int, ...]]]:
    """Combine chunk results; ties break to the lexicographically smaller committee."""
    if left is None:
        return right
    if right is None:
        return left
    return min(left, right)


def _iter_chunks(iterable: Iterable, size: int) -> Iterator[list]:
    iterator = iter(iterable)
    while True:
        chunk = list(itertools.islice(iterator, size))
        if not chunk:
            return
        yield chunk


def solve_subset_enum(
    instance: ProblemInstance,
    budget: SolverBudget = DEFAULT_BUDGET,
    candidate_pool: Optional[Sequence[int]] = None,
    chunk_size: int = 1024,
) -> Solution:
    """Optimal solution by trying every size-k committee.

    `candidate_pool` restricts the search to committees drawn from the given
    candidate indices.  This is the reference oracle for the whole package.
    """
    pool = sorted(range(instance.matrix.m) if candidate_pool is None else candidate_pool)
    if len(pool) > budget.max_subset_candidates:
        raise BudgetExceededError(
            f"subset enumeration over {len(pool)} candidates exceeds the "
            f"budget cap of {budget.max_subset_candidates}"
        )
    if len(pool) < instance.k:
        raise ValueError("candidate pool smaller than the committee size")
    deadline = _Deadline(budget)
    scorer = _committee_scorer(instance)
    best = None
    for chunk in _iter_chunks(itertools.combinations(pool, instance.k), chunk_size):
        deadline.check()
        best = merge_best(best, best_committee(chunk, scorer))
    assert best is not None
    return _committee_solution(instance, best[1])


def _partitions(n: int, max_blocks: int) -> Iterator[list[list[int]]]:
    """All set partitions of range(n) into at most max_blocks blocks.

    Blocks are ordered by their smallest member, so the enumeration order is
    deterministic.
    """
    blocks: list[list[int]] = []

    def extend(v: int) -> Iterator[list[list[int]]]:
        if v == n:
            yield blocks
            return
        for block in blocks:
            block.append(v)
            yield from extend(v + 1)
            block.pop()
        if len(blocks) < max_blocks:
            blocks.append([v])
            yield from extend(v + 1)
            blocks.pop()

    yield from extend(0)


def _match_blocks_sum(
    blocks: Sequence[Sequence[int]], matrix: MisrepMatrix
) -> tuple[int, list[int]]:
    """Min-cost matching of blocks to distinct candidates (sum of block costs)."""
    b, m = len(blocks), matrix.m
    source, sink = 0, 1 + b + m
    arcs = []
    for i in range(b):
        arcs.append((source, 1 + i, 0, 1, 0))
    block_arc_start = len(arcs)
    for i, block in enumerate(blocks):
        for c in range(m):
            cost = sum(matrix.rows[v][c] for v in block)
            arcs.append((1 + i, 1 + b + c, 0, 1, cost))
    for c in range(m):
        arcs.append((1 + b + c, sink, 0, 1, 0))
    result = feasible_min_cost(2 + b + m, arcs, source, sink, b)
    assert result is not None, "matching blocks to candidates cannot fail when b <= m"
    cost, flows = result
    matched = [-1] * b
    index = block_arc_start
    for i in range(b):
        for c in range(m):
            if flows[index]:
                matched[i] = c
            index += 1
    return cost, matched


def _match_blocks_minimax(
    blocks: Sequence[Sequence[int]], matrix: MisrepMatrix
) -> tuple[int, list[int]]:
    """Matching of blocks to distinct candidates minimizing the largest block cost."""
    b, m = len(blocks), matrix.m
    bottleneck = [
        [max(matrix.rows[v][c] for v in block) for c in range(m)] for block in blocks
    ]
    values = sorted({bottleneck[i][c] for i in range(b) for c in range(m)})

    def matching_at(limit: int) -> Optional[list[int]]:
        source, sink = 0, 1 + b + m
        arcs = []
        for i in range(b):
            arcs.append((source, 1 + i, 0, 1, 0))
        block_arc_start = len(arcs)
        edges = []
        for i in range(b):
            for c in range(m):
                if bottleneck[i][c] <= limit:
                    arcs.append((1 + i, 1 + b + c, 0, 1, 0))
                    edges.append((i, c))
        for c in range(m):
            arcs.append((1 + b + c, sink, 0, 1, 0))
        result = feasible_min_cost(2 + b + m, arcs, source, sink, b)
        if result is None:
            return None
        matched = [-1] * b
        for offset, (i, c) in enumerate(edges):
            if result[1][block_arc_start + offset]:
                matched[i] = c
        return matched

    lo, hi = 0, len(values) - 1
    best: Optional[tuple[int, list[int]]] = None
    while lo <= hi:
        mid = (lo + hi) // 2
        matched = matching_at(values[mid])
        if matched is not None:
            best = (values[mid], matched)
            hi = mid - 1
        else:
            lo = mid + 1
    assert best is not None, "matching always exists at the largest cost"
    return best


def solve_partition_enum(
    instance: ProblemInstance, budget: SolverBudget = DEFAULT_BUDGET
) -> Solution:
    """Optimal solution by trying every admissible partition of the voters.

    Each partition block is served by a single committee member; distinct
    blocks get distinct members via a matching.  The load-balanced rule only
    admits partitions into exactly k blocks with balanced sizes; the
    unconstrained rule admits any partition into at most k blocks, since
    unused seats can be filled arbitrarily.
    """
    matrix, k = instance.matrix, instance.k
    n = matrix.n
    if n > budget.max_partition_voters:
        raise BudgetExceededError(
            f"partition enumeration over {n} voters exceeds the budget cap "
            f"of {budget.max_partition_voters}"
        )
    deadline = _Deadline(budget)
    if instance.rule is Rule.MONROE:
        low, high, at_high = balanced_loads(n, k)
        required_sizes = sorted([high] * at_high + [low] * (k - at_high))
    matcher = (
        _match_blocks_sum if instance.objective is Objective.SUM else _match_blocks_minimax
    )

    best: Optional[tuple[int, tuple[int, ...], tuple[int, ...]]] = None
    for blocks in _partitions(n, k):
        deadline.check()
        if instance.rule is Rule.MONROE:
            if len(blocks) != k or sorted(len(b) for b in blocks) != required_sizes:
                continue
        value, matched = matcher(blocks, matrix)
        committee = _pad_committee(matched, k, matrix.m)
        mapping = [0] * n
        for block, c in zip(blocks, matched):
            for v in block:
                mapping[v] = c
        entry = (value, committee, tuple(mapping))
        if best is None or entry[:2] < best[:2]:
            best = entry
    assert best is not None
    value, committee, mapping = best
    assignment = Assignment(committee, mapping)
    return Solution(assignment, value, check_m_criterion(assignment, n, k))


def _check_sparsity(matrix: MisrepMatrix, bound: int) -> None:
    for v, row in enumerate(matrix.rows):
        cheap = sum(1 for x in row if x <= bound)
        if cheap > bound + 1:
            raise ValueError(
                f"voter {v} has {cheap} candidates within bound {bound}; the "
                "branching solver needs at most bound+1 (use solve_subset_enum)"
            )


def solve_cc_branch_rk(
    instance: ProblemInstance,
    budget: SolverBudget = DEFAULT_BUDGET,
    stats: Optional[SearchStats] = None,
) -> Optional[Solution]:
    """Decision procedure for the unconstrained rule, sum objective.

    Searches for a committee whose total misrepresentation is within the
    instance bound by branching on how the first uncovered voter is served.
    Requires each voter to have at most bound+1 candidates within the bound
    (rank-based tables always satisfy this).
    """
    if instance.rule is not Rule.CC or instance.objective is not Objective.SUM:
        raise ValueError("branching solver handles the unconstrained rule, sum objective")
    matrix, k, bound = instance.matrix, instance.k, instance.bound
    _check_sparsity(matrix, bound)
    rows = matrix.rows
    deadline = _Deadline(budget)

    def note_leaf() -> None:
        if stats is not None:
            stats.leaf_calls += 1

    def branch(
        remaining: tuple[int, ...], left: int, chosen: frozenset[int]
    ) -> Optional[frozenset[int]]:
        deadline.check()
        if left < 0 or len(chosen) > k:
            note_leaf()
            return None
        if not remaining or (
            chosen and sum(min(rows[w][c] for c in chosen) for w in remaining) <= left
        ):
            note_leaf()
            return chosen
        v, rest = remaining[0], remaining[1:]
        recursed = False
        for c in range(matrix.m):
            if rows[v][c] > left:
                continue
            recursed = True
            survivors = tuple(w for w in rest if rows[w][c] != 0)
            found = branch(survivors, left - rows[v][c], chosen | {c})
            if found is not None:
                return found
        if not recursed:
            note_leaf()
        return None

    chosen = branch(tuple(range(matrix.n)), bound, frozenset())
    if chosen is None:
        return None
    committee = _pad_committee(chosen, k, matrix.m)
    solution = _committee_solution(instance, committee)
    assert solution.objective_value <= bound
    return solution


def solve_minimax_cc_branch_rk(
    instance: ProblemInstance,
    budget: SolverBudget = DEFAULT_BUDGET,
    stats: Optional[SearchStats] = None,
) -> Optional[Solution]:
    """Decision procedure for the unconstrained rule, minimax objective.

    Branches on which candidate serves the first uncovered voter within the
    bound; each chosen candidate absorbs every voter it serves within the
    bound, and the committee allowance shrinks by one per choice.
    """
    if instance.rule is not Rule.CC or instance.objective is not Objective.MINIMAX:
        raise ValueError(
            "minimax branching solver handles the unconstrained rule, minimax objective"
        )
    matrix, k, bound = instance.matrix, instance.k, instance.bound
    _check_sparsity(matrix, bound)
    rows = matrix.rows
    deadline = _Deadline(budget)

    def note_leaf() -> None:
        if stats is not None:
            stats.leaf_calls += 1

    def branch(
        remaining: tuple[int, ...], seats: int, chosen: frozenset[int]
    ) -> Optional[frozenset[int]]:
        deadline.check()
        if not remaining:
            note_leaf()
            return chosen
        if seats == 0:
            note_leaf()
            return None
        v = remaining[0]
        recursed = False
        for c in range(matrix.m):
            if rows[v][c] > bound:
                continue
            recursed = True
            survivors = tuple(w for w in remaining if rows[w][c] > bound)
            found = branch(survivors, seats - 1, chosen | {c})
            if found is not None:
                return found
        if not recursed:
            note_leaf()
        return None

    chosen = branch(tuple(range(matrix.n)), k, frozenset())
    if chosen is None:
        return None
    committee = _pad_committee(chosen, k, matrix.m)
    solution = _committee_solution(instance, committee)
    assert solution.objective_value <= bound
    return solution


def _unique_value_candidates(matrix: MisrepMatrix, bound: int) -> list[dict[int, int]]:
    """Per voter, the candidate realizing each value in 0..bound, if unique.

    Raises if a voter has no zero-cost candidate or several candidates tied
    at the same value within the bound.
    """
    tables: list[dict[int, int]] = []
    for v, row in enumerate(matrix.rows):
        table: dict[int, int] = {}
        for c, x in enumerate(row):
            if x > bound:
                continue
            if x in table:
                raise ValueError(
                    f"voter {v} has two candidates at value {x}; the constant-bound "
                    "solver needs at most one candidate per voter per value"
                )
            table[x] = c
        if 0 not in table:
            raise ValueError(f"voter {v} has no zero-cost candidate")
        tables.append(table)
    return tables


def solve_constantR(
    instance: ProblemInstance, budget: SolverBudget = DEFAULT_BUDGET
) -> Optional[Solution]:
    """Decision procedure for the sum objective with a small bound.

    At most `bound` voters can be served at nonzero cost, so it enumerates
    which voters those are and at what cost each is served; everyone else is
    pinned to their zero-cost candidate.  Works for both rules.
    """
    if instance.objective is not Objective.SUM:
        raise ValueError("constant-bound solver handles the sum objective")
    matrix, k, bound = instance.matrix, instance.k, instance.bound
    if bound > budget.max_constant_bound:
        raise BudgetExceededError(
            f"bound {bound} exceeds the constant-bound cap of {budget.max_constant_bound}"
        )
    deadline = _Deadline(budget)
    tables = _unique_value_candidates(matrix, bound)
    n = matrix.n

    def try_assignment(mapping: list[int]) -> Optional[Solution]:
        committee = sorted(set(mapping))
        if instance.rule is Rule.CC:
            if len(committee) > k:
                return None
            padded = _pad_committee(committee, k, matrix.m)
            return _committee_solution(instance, padded)
        if len(committee) != k:
            return None
        assignment = Assignment(tuple(committee), tuple(mapping))
        if not check_m_criterion(assignment, n, k):
            return None
        return Solution(assignment, evaluate(matrix, tuple(mapping), Objective.SUM), True)

    pinned = [tables[v][0] for v in range(n)]
    for size in range(0, min(bound, n) + 1):
        for voters in itertools.combinations(range(n), size):
            deadline.check()
            for values in itertools.product(range(1, bound + 1), repeat=size):
                if sum(values) > bound:
                    continue
                mapping = list(pinned)
                feasible = True
                for v, value in zip(voters, values):
                    c = tables[v].get(value)
                    if c is None:
                        feasible = False
                        break
                    mapping[v] = c
                if not feasible:
                    continue
                solution = try_assignment(mapping)
                if solution is not None and solution.objective_value <= bound:
                    return solution
    return None


def _require_rank_matrix(matrix: MisrepMatrix) -> None:
    expected = list(range(matrix.m))
    for v, row in enumerate(matrix.rows):
        if sorted(row) != expected:
            raise ValueError(
                f"voter {v}: this solver needs rank-based misrepresentation rows"
            )


def solve_m_mw_rk(
    instance: ProblemInstance, budget: SolverBudget = DEFAULT_BUDGET
) -> Optional[Solution]:
    """Decision procedure for the load-balanced rule, sum objective.

    With many voters, any committee within the bound can only contain
    candidates that some voter ranks first, and there can be at most
    bound + k of those; enumerate committees over that restricted pool.
    With few voters, partition enumeration is already cheap.
    """
    if instance.rule is not Rule.MONROE or instance.objective is not Objective.SUM:
        raise ValueError("this solver handles the load-balanced rule, sum objective")
    matrix, k, bound = instance.matrix, instance.k, instance.bound
    _require_rank_matrix(matrix)
    if matrix.n <= (bound + 1) * k:
        solution = solve_partition_enum(instance, budget)
        return solution if solution.objective_value <= bound else None
    favorites = sorted({row.index(0) for row in matrix.rows})
    if len(favorites) > bound + k or len(favorites) < k:
        return None
    solution = solve_subset_enum(instance, budget, candidate_pool=favorites)
    return solution if solution.objective_value <= bound else None


def solve_minimax_m_mw_rk(
    instance: ProblemInstance, budget: SolverBudget = DEFAULT_BUDGET
) -> Optional[Solution]:
    """Decision procedure for the load-balanced rule, minimax objective.

    Every committee member must serve a full load of voters within the
    bound, so only candidates close enough to that many voters can win;
    enumerate committees over those.
    """
    if instance.rule is not Rule.MONROE or instance.objective is not Objective.MINIMAX:
        raise ValueError("this solver handles the load-balanced rule, minimax objective")
    matrix, k, bound = instance.matrix, instance.k, instance.bound
    _require_rank_matrix(matrix)
    if matrix.n <= (bound + 1) * k:
        solution = solve_partition_enum(instance, budget)
        return solution if solution.objective_value <= bound else None
    low, _, _ = balanced_loads(matrix.n, k)
    pool = [
        c
        for c in range(matrix.m)
        if sum(1 for row in matrix.rows if row[c] <= bound) >= low
    ]
    if len(pool) < k:
        return None
    solution = solve_subset_enum(instance, budget, candidate_pool=pool)
    return solution if solution.objective_value <= bound else None


def solve_minimax_R0(instance: ProblemInstance) -> Optional[Solution]:
    """Minimax decision at bound zero: every voter must get a zero-cost winner.

    Rank-based rows have exactly one zero per voter, so the assignment is
    forced; all that remains is counting the forced winners and, for the
    load-balanced rule, checking their loads.
    """
    if instance.objective is not Objective.MINIMAX:
        raise ValueError("this solver handles the minimax objective")
    if instance.bound != 0:
        raise ValueError("this solver decides only the bound-zero case")
    matrix, k = instance.matrix, instance.k
    for v, row in enumerate(matrix.rows):
        if row.count(0) != 1:
            raise ValueError(f"voter {v}: exactly one zero-cost candidate required")
    tops = tuple(row.index(0) for row in matrix.rows)
    forced = sorted(set(tops))
    if instance.rule is Rule.CC:
        if len(forced) > k:
            return None
        committee = _pad_committee(forced, k, matrix.m)
        assignment = Assignment(committee, tops)
        return Solution(assignment, 0, check_m_criterion(assignment, matrix.n, k))
    if len(forced) != k:
        return None
    assignment = Assignment(tuple(forced), tops)
    if not check_m_criterion(assignment, matrix.n, k):
        return None
    return Solution(assignment, 0, True)


DecisionSolver = Callable[..., Optional[Solution]]


def _decision_solver_for(instance: ProblemInstance, name: str) -> DecisionSolver:
    table: dict[tuple[str, Rule, Objective], DecisionSolver] = {
        ("branch-rk", Rule.CC, Objective.SUM): solve_cc_branch_rk,
        ("branch-rk", Rule.CC, Objective.MINIMAX): solve_minimax_cc_branch_rk,
        ("constant-r", Rule.CC, Objective.SUM): solve_constantR,
        ("constant-r", Rule.MONROE, Objective.SUM): solve_constantR,
        ("monroe-rk", Rule.MONROE, Objective.SUM): solve_m_mw_rk,
        ("monroe-rk", Rule.MONROE, Objective.MINIMAX): solve_minimax_m_mw_rk,
    }
    key = (name, instance.rule, instance.objective)
    if key not in table:
        raise ValueError(
            f"solver {name!r} does not support rule={instance.rule.value}, "
            f"objective={instance.objective.value}"
        )
    return table[key]


def optimize(
    instance: ProblemInstance,
    solver: str = "subset-enum",
    budget: SolverBudget = DEFAULT_BUDGET,
) -> Solution:
    """Find the optimal objective value, via the named solver.

    Enumeration solvers optimize directly.  Decision solvers are wrapped in
    a binary search over candidate bounds: the distinct matrix values for
    minimax, the integer range up to n times the largest entry for sum.
    """
    if solver == "subset-enum":
        return solve_subset_enum(instance, budget)
    if solver == "partition-enum":
        return solve_partition_enum(instance, budget)
    decide = _decision_solver_for(instance, solver)
    if instance.objective is Objective.MINIMAX:
        grid: Optional[Sequence[int]] = instance.matrix.distinct_values()
        limit = len(grid) - 1
    else:
        grid = None
        limit = instance.matrix.n * instance.matrix.max_value()

    def probe(index: int) -> Optional[Solution]:
        bound = grid[index] if grid is not None else index
        return decide(replace(instance, bound=bound), budget)

    # Gallop up to the first feasible bound, then refine by binary search.
    # Working upward keeps every probed bound close to the optimum, which
    # matters for solvers whose cost grows quickly with the bound.
    best: Optional[Solution] = None
    last_infeasible = -1
    step = 0
    while True:
        point = min(step, limit)
        best = probe(point)
        if best is not None or point >= limit:
            break
        last_infeasible = point
        step = step + 1 if step < 4 else step * 2
    assert best is not None, "the largest probed bound is always feasible"
    lo, hi = last_infeasible + 1, min(step, limit) - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        found = probe(mid)
        if found is not None:
            best = found
            hi = mid - 1
        else:
            lo = mid + 1
    return best
