"""Command-line front end: solve, detect-axis, gen, verify, bench.

Every subcommand reads and writes the plain-text formats from
:mod:`proprep.fileio`.  ``solve`` answers the decision question carried by
the instance file: it prints a solution record on stdout when some outcome
stays within the instance bound (reporting the best value reachable within
it), and exits 1 when none does.  Timing goes to stderr so stdout stays
byte-stable and pipeable into ``verify``.

Exit codes: 0 success (and feasible), 1 infeasible or failed verification
or not single-peaked, 2 usage and input errors, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Callable, Optional, Sequence

from .core import (
    ApprovalMisrep,
    BordaMisrep,
    BudgetExceededError,
    Election,
    Objective,
    ProblemInstance,
    Rule,
    Solution,
    build_misrep,
    verify_solution,
)
from .fileio import (
    ParseError,
    parse_instance,
    parse_solution,
    render_instance,
    render_solution,
    worst_bound,
)
from .generators import random_election, random_prefix_approvals
from .hardness import (
    HittingSetInstance,
    RX3CInstance,
    gen_hs_approval,
    gen_hs_borda,
    gen_rx3c_monroe,
    gen_vc_minimax,
)
from .single_peaked import (
    detect_axis,
    sample_single_peaked_election,
    solve_cc_minimax_sp,
    solve_cc_sum_sp,
)
from .solvers import (
    DEFAULT_BUDGET,
    SolverBudget,
    solve_cc_branch_rk,
    solve_constantR,
    solve_m_mw_rk,
    solve_minimax_cc_branch_rk,
    solve_minimax_m_mw_rk,
    solve_minimax_R0,
    solve_partition_enum,
    solve_subset_enum,
)
from .stabbing import solve_minimax_m_mw_sp, solve_monroe_sum_sp

SOLVER_NAMES = (
    "auto",
    "subset-enum",
    "partition-enum",
    "branch-rk",
    "constant-r",
    "monroe-rk",
    "minimax-r0",
    "sp-dp",
    "sp-greedy",
    "sp-stab",
)

GEN_FAMILIES = (
    "random",
    "single-peaked",
    "hs-approval",
    "hs-borda",
    "vc-minimax",
    "rx3c-monroe",
)


class _Failure(Exception):
    """Abort the command with a message on stderr and a fixed exit code."""

    def __init__(self, code: int, message: str) -> None:
        self.code = code
        self.message = message
        super().__init__(message)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as error:
        raise _Failure(2, f"{path}: {error.strerror or error}") from None


def _parse_instance_file(path: str) -> ProblemInstance:
    try:
        return parse_instance(_read_text(path))
    except ParseError as error:
        raise _Failure(2, f"{path}: {error}") from None


def _within_bound(solution: Solution, bound: int) -> Optional[Solution]:
    return solution if solution.objective_value <= bound else None


def _search_within(
    instance: ProblemInstance,
    decide: Callable[[ProblemInstance], Optional[Solution]],
    grid: Optional[Sequence[int]] = None,
) -> Optional[Solution]:
    """Best solution within the instance bound, via a decision procedure.

    Probes candidate bounds from below: a short linear ramp, then doubling
    until feasible, then binary refinement, never probing past the instance
    bound.  ``grid`` restricts the probed bounds to the given increasing
    values (used for minimax, where only matrix entries matter); otherwise
    every integer up to the bound is eligible.
    """
    points: Optional[list[int]] = None
    if grid is not None:
        points = [value for value in grid if value <= instance.bound]
        if not points:
            return None
        limit = len(points) - 1
    else:
        limit = instance.bound

    def probe(index: int) -> Optional[Solution]:
        bound = points[index] if points is not None else index
        return decide(replace(instance, bound=bound))

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
    if best is None:
        return None
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


def _require_axis(instance: ProblemInstance) -> tuple[int, ...]:
    axis = detect_axis(instance.election)
    if axis is None:
        raise _Failure(
            2, "the election is not single-peaked; sp-* solvers need an axis"
        )
    return axis


def _solve_named(
    instance: ProblemInstance, solver: str, budget: SolverBudget
) -> Optional[Solution]:
    """Run one named solver; the best solution within the bound, or None."""
    bound = instance.bound
    if solver == "subset-enum":
        return _within_bound(solve_subset_enum(instance, budget), bound)
    if solver == "partition-enum":
        return _within_bound(solve_partition_enum(instance, budget), bound)
    if solver == "branch-rk":
        if instance.objective is Objective.SUM:
            return _search_within(instance, lambda i: solve_cc_branch_rk(i, budget))
        return _search_within(
            instance,
            lambda i: solve_minimax_cc_branch_rk(i, budget),
            instance.matrix.distinct_values(),
        )
    if solver == "constant-r":
        return _search_within(instance, lambda i: solve_constantR(i, budget))
    if solver == "monroe-rk":
        if instance.objective is Objective.SUM:
            return _search_within(instance, lambda i: solve_m_mw_rk(i, budget))
        return _search_within(
            instance,
            lambda i: solve_minimax_m_mw_rk(i, budget),
            instance.matrix.distinct_values(),
        )
    if solver == "minimax-r0":
        return solve_minimax_R0(instance)
    axis = _require_axis(instance)
    if solver == "sp-dp":
        return _within_bound(solve_cc_sum_sp(instance, axis), bound)
    if solver == "sp-greedy":
        return _search_within(
            instance,
            lambda i: solve_cc_minimax_sp(i, axis),
            instance.matrix.distinct_values(),
        )
    if instance.objective is Objective.SUM:
        return _within_bound(solve_monroe_sum_sp(instance, axis), bound)
    return _search_within(
        instance,
        lambda i: solve_minimax_m_mw_sp(i, axis),
        instance.matrix.distinct_values(),
    )


def _solve_auto(
    instance: ProblemInstance, budget: SolverBudget
) -> tuple[str, Optional[Solution]]:
    """Pick the cheapest applicable method, falling back to enumeration.

    Structure is tried first (an axis, a tiny bound), and a method that
    turns out not to apply falls through; an infeasible answer from an
    applicable method is final.  The returned name is the method that
    actually produced the answer.
    """
    axis = detect_axis(instance.election)
    if axis is not None:
        if instance.rule is Rule.CC and instance.objective is Objective.SUM:
            try:
                solution = solve_cc_sum_sp(instance, axis)
            except ValueError:
                pass
            else:
                return "sp-dp", _within_bound(solution, instance.bound)
        elif instance.rule is Rule.CC:
            try:
                return "sp-greedy", _search_within(
                    instance,
                    lambda i: solve_cc_minimax_sp(i, axis),
                    instance.matrix.distinct_values(),
                )
            except ValueError:
                pass
        elif instance.objective is Objective.SUM:
            try:
                solution = solve_monroe_sum_sp(instance, axis)
            except ValueError:
                pass
            else:
                return "sp-stab", _within_bound(solution, instance.bound)
        else:
            try:
                return "sp-stab", _search_within(
                    instance,
                    lambda i: solve_minimax_m_mw_sp(i, axis),
                    instance.matrix.distinct_values(),
                )
            except ValueError:
                pass
    if (
        instance.objective is Objective.SUM
        and instance.bound <= budget.max_constant_bound
    ):
        try:
            return "constant-r", _search_within(
                instance, lambda i: solve_constantR(i, budget)
            )
        except (BudgetExceededError, ValueError):
            pass
    if instance.objective is Objective.MINIMAX and instance.bound == 0:
        try:
            return "minimax-r0", solve_minimax_R0(instance)
        except ValueError:
            pass
    return "subset-enum", _within_bound(
        solve_subset_enum(instance, budget), instance.bound
    )


def _budget_from(args: argparse.Namespace) -> SolverBudget:
    return SolverBudget(
        max_subset_candidates=args.budget_subset_candidates,
        max_partition_voters=args.budget_partition_voters,
        max_constant_bound=args.budget_constant_bound,
        max_seconds=args.budget_seconds,
    )


def _add_budget_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--budget-subset-candidates",
        type=int,
        default=DEFAULT_BUDGET.max_subset_candidates,
        help="largest candidate count committee enumeration will attempt",
    )
    parser.add_argument(
        "--budget-partition-voters",
        type=int,
        default=DEFAULT_BUDGET.max_partition_voters,
        help="largest voter count partition enumeration will attempt",
    )
    parser.add_argument(
        "--budget-constant-bound",
        type=int,
        default=DEFAULT_BUDGET.max_constant_bound,
        help="largest bound the constant-r solver will attempt",
    )
    parser.add_argument(
        "--budget-seconds",
        type=float,
        default=DEFAULT_BUDGET.max_seconds,
        help="wall-clock cap per solver run (default: none)",
    )


def _apply_overrides(
    instance: ProblemInstance, args: argparse.Namespace
) -> ProblemInstance:
    changes = {}
    if args.rule is not None:
        changes["rule"] = Rule(args.rule)
    if args.objective is not None:
        changes["objective"] = Objective(args.objective)
    if args.k is not None:
        changes["k"] = args.k
    if changes:
        instance = replace(instance, **changes)
    if args.bound is not None:
        if args.bound == "-":
            value = worst_bound(instance.matrix, instance.objective)
        else:
            try:
                value = int(args.bound)
            except ValueError:
                raise _Failure(2, "--R must be a nonnegative integer or '-'") from None
            if value < 0:
                raise _Failure(2, "--R must be a nonnegative integer or '-'")
        instance = replace(instance, bound=value)
    return instance


def _cmd_solve(args: argparse.Namespace) -> int:
    instance = _apply_overrides(_parse_instance_file(args.path), args)
    budget = _budget_from(args)
    started = time.perf_counter()
    if args.solver == "auto":
        name, solution = _solve_auto(instance, budget)
    else:
        name, solution = args.solver, _solve_named(instance, args.solver, budget)
    elapsed = (time.perf_counter() - started) * 1000.0
    print(f"wall-time-ms {elapsed:.1f}", file=sys.stderr)
    if solution is None:
        print(
            f"infeasible: no outcome has value <= {instance.bound} "
            f"({instance.rule.value}, {instance.objective.value}, k={instance.k})",
            file=sys.stderr,
        )
        return 1
    sys.stdout.write(render_solution(solution, instance.election, solver=name))
    return 0


def _cmd_detect_axis(args: argparse.Namespace) -> int:
    instance = _parse_instance_file(args.path)
    axis = detect_axis(instance.election)
    if axis is None:
        print("not single-peaked")
        return 1
    print(" ".join(instance.election.candidates[c] for c in axis))
    return 0


def _forbid(family: str, **given: object) -> None:
    for name, value in given.items():
        if value is not None:
            raise _Failure(2, f"--{name} does not apply to the {family} family")


def _require(family: str, **given: object) -> None:
    for name, value in given.items():
        if value is None:
            raise _Failure(2, f"the {family} family requires --{name}")


def _parse_index_tuple(token: str, flag: str) -> tuple[int, ...]:
    try:
        values = tuple(sorted(int(part) for part in token.split(",")))
    except ValueError:
        raise _Failure(
            2, f"--{flag} expects comma-separated integers, got {token!r}"
        ) from None
    return values


def _gen_bound(args: argparse.Namespace) -> Optional[int]:
    if args.bound is None or args.bound == "-":
        return None
    try:
        value = int(args.bound)
    except ValueError:
        raise _Failure(2, "--bound must be a nonnegative integer or '-'") from None
    if value < 0:
        raise _Failure(2, "--bound must be a nonnegative integer or '-'")
    return value


def _gen_profile(args: argparse.Namespace) -> ProblemInstance:
    """The random and single-peaked families share everything but sampling."""
    _require(args.family, m=args.m, n=args.n, k=args.k)
    _forbid(args.family, universe=args.universe, set=args.sets, edge=args.edges)
    rng = random.Random(args.seed)
    if args.family == "random":
        election = random_election(rng, args.m, args.n)
    else:
        sampled, _ = sample_single_peaked_election(rng, args.m, args.n)
        election = Election(
            tuple(f"c{i + 1}" for i in range(args.m)), sampled.votes
        )
    misrep = args.misrep or "borda"
    if misrep == "borda":
        matrix = build_misrep(election, BordaMisrep())
    else:
        matrix = build_misrep(
            election, ApprovalMisrep(random_prefix_approvals(rng, election))
        )
    rule = Rule(args.rule) if args.rule else Rule.CC
    objective = Objective(args.objective) if args.objective else Objective.SUM
    bound = _gen_bound(args)
    if bound is None:
        bound = worst_bound(matrix, objective)
    return ProblemInstance(election, matrix, rule, objective, args.k, bound)


def _gen_hitting_set(args: argparse.Namespace) -> ProblemInstance:
    _require(args.family, universe=args.universe, set=args.sets, k=args.k)
    _forbid(
        args.family,
        m=args.m,
        n=args.n,
        misrep=args.misrep,
        bound=args.bound,
        edge=args.edges,
    )
    family = tuple(_parse_index_tuple(token, "set") for token in args.sets)
    hs = HittingSetInstance(args.universe, family, args.k)
    rule = Rule(args.rule) if args.rule else Rule.MONROE
    objective = Objective(args.objective) if args.objective else Objective.SUM
    if args.family == "hs-approval":
        return gen_hs_approval(hs, args.k, rule, objective)
    return gen_hs_borda(hs, args.k, rule, objective)


def _gen_vertex_cover(args: argparse.Namespace) -> ProblemInstance:
    _require(args.family, edge=args.edges, k=args.k)
    _forbid(
        args.family,
        m=args.m,
        n=args.n,
        universe=args.universe,
        set=args.sets,
        misrep=args.misrep,
    )
    if args.objective is not None and args.objective != Objective.MINIMAX.value:
        raise _Failure(2, "the vc-minimax family always uses the minimax objective")
    edges = tuple(_parse_index_tuple(token, "edge") for token in args.edges)
    bound = _gen_bound(args)
    rule = Rule(args.rule) if args.rule else Rule.CC
    return gen_vc_minimax(edges, args.k, 1 if bound is None else bound, rule)


def _gen_exact_cover(args: argparse.Namespace) -> ProblemInstance:
    _require(args.family, n=args.n)
    _forbid(
        args.family,
        m=args.m,
        k=args.k,
        bound=args.bound,
        rule=args.rule,
        objective=args.objective,
        misrep=args.misrep,
        universe=args.universe,
        edge=args.edges,
    )
    n = args.n
    if args.sets is not None:
        sets = tuple(_parse_index_tuple(token, "set") for token in args.sets)
    else:
        # Disjoint consecutive triples, each listed three times: a solvable
        # default whose elements are then scrambled by the seed.
        perm = list(range(n))
        random.Random(args.seed).shuffle(perm)
        sets = tuple(
            tuple(sorted(perm[3 * block + offset] for offset in range(3)))
            for block in range(max(n // 3, 0))
            for _ in range(3)
        )
    instance, _ = gen_rx3c_monroe(RX3CInstance(n, sets))
    return instance


def _cmd_gen(args: argparse.Namespace) -> int:
    builders = {
        "random": _gen_profile,
        "single-peaked": _gen_profile,
        "hs-approval": _gen_hitting_set,
        "hs-borda": _gen_hitting_set,
        "vc-minimax": _gen_vertex_cover,
        "rx3c-monroe": _gen_exact_cover,
    }
    text = render_instance(builders[args.family](args))
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    instance = _parse_instance_file(args.instance)
    try:
        solution, _ = parse_solution(_read_text(args.solution), instance.election)
    except ParseError as error:
        raise _Failure(2, f"{args.solution}: {error}") from None
    report = verify_solution(instance, solution)
    for check in report.checks:
        if check.passed:
            print(f"{check.name}: pass")
        else:
            print(f"{check.name}: FAIL ({check.detail})")
    print("all checks passed" if report.ok else "verification failed")
    return 0 if report.ok else 1


def _bench_roster(instance: ProblemInstance, budget: SolverBudget) -> list[str]:
    roster = ["auto"]
    if instance.matrix.m <= budget.max_subset_candidates:
        roster.append("subset-enum")
    if instance.matrix.n <= budget.max_partition_voters:
        roster.append("partition-enum")
    if detect_axis(instance.election) is not None:
        if instance.rule is Rule.CC:
            roster.append(
                "sp-dp" if instance.objective is Objective.SUM else "sp-greedy"
            )
        else:
            roster.append("sp-stab")
    return roster


def _cmd_bench(args: argparse.Namespace) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        raise _Failure(2, f"{args.dir}: not a directory")
    budget = _budget_from(args)
    disagreements = []
    for path in sorted(directory.glob("*.elect")):
        try:
            instance = parse_instance(path.read_text())
        except ParseError as error:
            raise _Failure(2, f"{path}: {error}") from None
        outcomes: dict[str, Optional[int]] = {}
        for name in _bench_roster(instance, budget):
            started = time.perf_counter()
            try:
                if name == "auto":
                    _, solution = _solve_auto(instance, budget)
                else:
                    solution = _solve_named(instance, name, budget)
            except BudgetExceededError as error:
                status = f"skipped (budget: {error})"
            except (ValueError, _Failure) as error:
                reason = error.message if isinstance(error, _Failure) else error
                status = f"skipped ({reason})"
            else:
                if solution is None:
                    status = "infeasible"
                    outcomes[name] = None
                else:
                    status = f"ok value={solution.objective_value}"
                    outcomes[name] = solution.objective_value
            elapsed = (time.perf_counter() - started) * 1000.0
            print(f"{path.name} {name} {status} {elapsed:.1f}ms")
        if len(set(outcomes.values())) > 1:
            report = ", ".join(
                f"{name}={'infeasible' if value is None else value}"
                for name, value in sorted(outcomes.items())
            )
            disagreements.append(f"{path.name}: {report}")
    for line in disagreements:
        print(f"disagreement: {line}", file=sys.stderr)
    return 1 if disagreements else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proprep",
        description="Committee selection by total or worst-case misrepresentation.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser(
        "solve", help="solve an instance file and print a solution record"
    )
    solve.add_argument("path", help="instance file")
    solve.add_argument("--solver", choices=SOLVER_NAMES, default="auto")
    solve.add_argument("--rule", choices=[rule.value for rule in Rule])
    solve.add_argument(
        "--objective", choices=[objective.value for objective in Objective]
    )
    solve.add_argument("--k", type=int, help="override the committee size")
    solve.add_argument(
        "--R", dest="bound", help="override the bound (integer, or '-' for unbounded)"
    )
    _add_budget_flags(solve)
    solve.set_defaults(run=_cmd_solve)

    axis = commands.add_parser(
        "detect-axis", help="print a societal axis for the election, if one exists"
    )
    axis.add_argument("path", help="instance file")
    axis.set_defaults(run=_cmd_detect_axis)

    gen = commands.add_parser("gen", help="generate an instance file")
    gen.add_argument("family", choices=GEN_FAMILIES)
    gen.add_argument("--m", type=int, help="number of candidates")
    gen.add_argument("--n", type=int, help="number of voters (elements for rx3c)")
    gen.add_argument("--k", type=int, help="committee size")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--rule", choices=[rule.value for rule in Rule])
    gen.add_argument(
        "--objective", choices=[objective.value for objective in Objective]
    )
    gen.add_argument("--misrep", choices=["borda", "approval"])
    gen.add_argument("--bound", help="decision bound (integer, or '-' for unbounded)")
    gen.add_argument("--universe", type=int, help="ground-set size for hs families")
    gen.add_argument(
        "--set",
        dest="sets",
        action="append",
        metavar="E1,E2,...",
        help="one set of zero-based element indices; repeatable",
    )
    gen.add_argument(
        "--edge",
        dest="edges",
        action="append",
        metavar="A,B",
        help="one edge as two zero-based vertex indices; repeatable",
    )
    gen.add_argument("--out", help="write here instead of stdout")
    gen.set_defaults(run=_cmd_gen)

    verify = commands.add_parser(
        "verify", help="check a solution record against its instance"
    )
    verify.add_argument("instance", help="instance file")
    verify.add_argument("solution", help="solution file")
    verify.set_defaults(run=_cmd_verify)

    bench = commands.add_parser(
        "bench", help="run every applicable solver over a directory of instances"
    )
    bench.add_argument("dir", help="directory scanned for *.elect files")
    _add_budget_flags(bench)
    bench.set_defaults(run=_cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        code = exit_.code
        return code if isinstance(code, int) else 0 if code is None else 2
    try:
        return args.run(args)
    except _Failure as failure:
        print(failure.message, file=sys.stderr)
        return failure.code
    except BudgetExceededError as error:
        print(f"budget exceeded: {error}", file=sys.stderr)
        print(
            "raise the matching --budget-* cap, pick another --solver, "
            "or shrink the instance",
            file=sys.stderr,
        )
        return 3
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except OSError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
