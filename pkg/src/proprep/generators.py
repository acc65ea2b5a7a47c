"""Seeded random elections for tests, benchmarks, and the command line."""

from __future__ import annotations

import random

from .core import Election


def random_election(rng: random.Random, num_candidates: int, num_voters: int) -> Election:
    """A uniformly random profile with candidates named c1..cm.

    Each voter's ranking is an independent uniform shuffle, so repeated
    calls with the same seeded generator reproduce the same election.
    """
    if num_candidates < 1 or num_voters < 1:
        raise ValueError("need at least one candidate and one voter")
    names = tuple(f"c{i + 1}" for i in range(num_candidates))
    votes = []
    for _ in range(num_voters):
        vote = list(range(num_candidates))
        rng.shuffle(vote)
        votes.append(tuple(vote))
    return Election(names, tuple(votes))


def random_prefix_approvals(
    rng: random.Random, election: Election
) -> tuple[tuple[int, ...], ...]:
    """Per-voter approval sets drawn as random-length prefixes of the votes.

    A voter may approve anywhere from nobody to everybody; the result is
    valid input for prefix-checked approval misrepresentation.
    """
    approvals = []
    for vote in election.votes:
        length = rng.randint(0, election.m)
        approvals.append(tuple(vote[:length]))
    return tuple(approvals)
