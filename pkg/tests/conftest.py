"""Shared fixtures and small builders for the test suite."""

from __future__ import annotations

import pytest

from proprep.core import (
    BordaMisrep,
    Election,
    MisrepMatrix,
    Objective,
    ProblemInstance,
    Rule,
    build_misrep,
)


def ranked(candidates: str, *votes: str) -> Election:
    """Build an election from space-separated name strings.

    ``ranked("a b c", "b a c", ...)`` declares candidates in index order and
    one vote per extra argument, names in decreasing preference.
    """
    names = tuple(candidates.split())
    index = {name: i for i, name in enumerate(names)}
    return Election(
        names,
        tuple(tuple(index[name] for name in vote.split()) for vote in votes),
    )


def instance_for(
    election: Election,
    rule: Rule,
    objective: Objective,
    k: int,
    bound: int = 0,
    matrix: MisrepMatrix | None = None,
) -> ProblemInstance:
    if matrix is None:
        matrix = build_misrep(election, BordaMisrep())
    return ProblemInstance(election, matrix, rule, objective, k, bound)


@pytest.fixture
def profile_3v4c() -> Election:
    """Three voters over c1..c4; single-peaked along the index order."""
    return ranked(
        "c1 c2 c3 c4",
        "c1 c2 c3 c4",
        "c2 c3 c4 c1",
        "c3 c2 c1 c4",
    )


@pytest.fixture
def profile_6v4c() -> Election:
    """Four a-leaning voters and two c-leaning voters over a..d."""
    return ranked(
        "a b c d",
        "a b c d",
        "a b c d",
        "a b c d",
        "a b c d",
        "c b a d",
        "c b a d",
    )
