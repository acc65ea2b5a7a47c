"""Voter-to-committee assignment: argmin maps, balanced flows, oracles."""

from __future__ import annotations

import random

import pytest

from proprep.assignment import (
    assign_cc,
    assign_monroe_minimax,
    assign_monroe_sum,
    cc_value,
    enumerate_balanced_assignments,
    monroe_minimax_value,
)
from proprep.core import (
    ApprovalMisrep,
    BordaMisrep,
    BudgetExceededError,
    Election,
    Objective,
    balanced_loads,
    build_misrep,
    check_m_criterion,
    evaluate,
)
from proprep.flows import feasible_min_cost

from conftest import ranked


def borda(election):
    return build_misrep(election, BordaMisrep())


def random_election(rng: random.Random, m: int, n: int) -> Election:
    names = tuple(f"c{i}" for i in range(m))
    votes = tuple(
        tuple(rng.sample(range(m), m)) for _ in range(n)
    )
    return Election(names, votes)


class TestFlowEngine:
    def test_min_cost_prefers_cheap_arc(self):
        # 0 -> 1 via two parallel arcs of different cost.
        arcs = [(0, 1, 0, 1, 5), (0, 1, 0, 1, 2)]
        cost, flows = feasible_min_cost(2, arcs, 0, 1, 1)
        assert cost == 2
        assert flows == [0, 1]

    def test_lower_bound_forces_expensive_arc(self):
        arcs = [(0, 1, 1, 1, 5), (0, 1, 0, 1, 2)]
        cost, flows = feasible_min_cost(2, arcs, 0, 1, 1)
        assert cost == 5
        assert flows == [1, 0]

    def test_infeasible_returns_none(self):
        arcs = [(0, 1, 0, 1, 0)]
        assert feasible_min_cost(2, arcs, 0, 1, 2) is None

    def test_lower_bound_above_demand_is_infeasible(self):
        arcs = [(0, 1, 2, 3, 0)]
        assert feasible_min_cost(2, arcs, 0, 1, 1) is None

    def test_two_stage_network(self):
        # 0 -> {1,2} -> 3, middle node 1 capped at one unit.
        arcs = [
            (0, 1, 0, 1, 0),
            (0, 2, 0, 2, 3),
            (1, 3, 0, 2, 1),
            (2, 3, 0, 2, 1),
        ]
        cost, flows = feasible_min_cost(4, arcs, 0, 3, 3)
        assert cost == 0 * 1 + 3 * 2 + 1 * 3
        assert flows == [1, 2, 1, 2]


class TestAssignCC:
    def test_best_winner_per_voter(self, profile_3v4c):
        matrix = borda(profile_3v4c)
        assignment = assign_cc((0, 2), matrix)
        assert assignment.mapping == (0, 2, 2)
        assert evaluate(matrix, assignment.mapping, Objective.SUM) == 1

    def test_single_winner_takes_everyone(self, profile_3v4c):
        matrix = borda(profile_3v4c)
        assignment = assign_cc((3,), matrix)
        assert assignment.mapping == (3, 3, 3)
        assert evaluate(matrix, assignment.mapping, Objective.SUM) == 8

    def test_ties_break_to_lowest_index(self):
        election = ranked("a b c", "a b c", "a b c")
        matrix = build_misrep(election, ApprovalMisrep(((0, 1), (0, 1))))
        assignment = assign_cc((1, 2), matrix)
        assert assignment.mapping == (1, 1)
        # a and b both cost 0 for both voters; the lower index wins.
        tied = assign_cc((0, 1), matrix)
        assert tied.mapping == (0, 0)

    def test_cc_value_matches_assignment(self, profile_3v4c):
        matrix = borda(profile_3v4c)
        for winners in [(0,), (1, 3), (0, 1, 2)]:
            assignment = assign_cc(winners, matrix)
            for objective in Objective:
                assert cc_value(matrix, winners, objective) == evaluate(
                    matrix, assignment.mapping, objective
                )


class TestEnumerateBalanced:
    def test_counts(self):
        assert len(list(enumerate_balanced_assignments((0, 1), 4))) == 6
        assert len(list(enumerate_balanced_assignments((0, 1), 2))) == 2
        assert len(list(enumerate_balanced_assignments((5,), 3))) == 1
        # Loads (3,2) and (2,3).
        assert len(list(enumerate_balanced_assignments((0, 1), 5))) == 20

    def test_every_map_is_balanced(self):
        for mapping in enumerate_balanced_assignments((0, 1, 2), 7):
            counts = [mapping.count(w) for w in (0, 1, 2)]
            low, high, at_high = balanced_loads(7, 3)
            assert all(low <= c <= high for c in counts)
            assert sum(1 for c in counts if c == high) == at_high

    def test_guard(self):
        with pytest.raises(BudgetExceededError):
            next(enumerate_balanced_assignments((0, 1), 11))


class TestMonroeAssignments:
    def test_sum_on_skewed_profile(self, profile_6v4c):
        matrix = borda(profile_6v4c)
        solution = assign_monroe_sum((0, 1, 2), matrix)
        assert solution.objective_value == 2
        assert solution.m_criterion_satisfied
        assert check_m_criterion(solution.assignment, 6, 3)
        assert evaluate(matrix, solution.assignment.mapping, Objective.SUM) == 2

    def test_minimax_zero_feasible_with_distinct_tops(self, profile_3v4c):
        matrix = borda(profile_3v4c)
        assignment = assign_monroe_minimax((0, 1, 2), matrix, 0)
        assert assignment is not None
        assert assignment.mapping == (0, 1, 2)

    def test_minimax_zero_infeasible_without_top(self, profile_6v4c):
        matrix = borda(profile_6v4c)
        assert assign_monroe_minimax((0, 1, 3), matrix, 0) is None

    def test_minimax_max_value_always_feasible(self, profile_6v4c):
        matrix = borda(profile_6v4c)
        assignment = assign_monroe_minimax((0, 1, 3), matrix, matrix.max_value())
        assert assignment is not None
        assert check_m_criterion(assignment, 6, 3)

    def test_flow_matches_enumeration_oracle(self):
        rng = random.Random(90125)
        for _ in range(40):
            m = rng.randint(2, 5)
            n = rng.randint(2, 6)
            k = rng.randint(1, min(m, n))
            election = random_election(rng, m, n)
            matrix = borda(election)
            winners = tuple(sorted(rng.sample(range(m), k)))
            best_sum = min(
                evaluate(matrix, mapping, Objective.SUM)
                for mapping in enumerate_balanced_assignments(winners, n)
            )
            best_max = min(
                evaluate(matrix, mapping, Objective.MINIMAX)
                for mapping in enumerate_balanced_assignments(winners, n)
            )
            solution = assign_monroe_sum(winners, matrix)
            assert solution.objective_value == best_sum
            value, witness = monroe_minimax_value(matrix, winners)
            assert value == best_max
            assert check_m_criterion(witness, n, k)

    def test_minimax_bound_search_is_tight(self, profile_6v4c):
        matrix = borda(profile_6v4c)
        value, witness = monroe_minimax_value(matrix, (0, 1, 2))
        assert value == 1
        assert evaluate(matrix, witness.mapping, Objective.MINIMAX) == 1
        assert assign_monroe_minimax((0, 1, 2), matrix, value - 1) is None
