"""Acceptance suite.

Each test is one numbered criterion; every one prints a single PASS/FAIL
line (run with ``pytest -s`` to see them stream).  The exhaustive sweep
over all 9471 loops of orders 1..6 is computed once per session.
"""

import time
from dataclasses import dataclass
from pathlib import Path

import pytest

from loopkit.cli import main
from loopkit.conjecture import (GOAL_ORDER, check_conjecture, check_goals,
                                is_aim, lc_profile, quotient_oracle,
                                variety_membership)
from loopkit.enumeration import count_loops, dedup_classes, loop_tables
from loopkit.perms import is_abelian
from loopkit.prover import (AUX_LEFT_INNER_INVERSE, MockAdapter, ProverProblem,
                            eliminate_assumptions, p9loop_run, render_problem)
from loopkit.structure import center, inn, upper_central_series
from loopkit.tables import LoopTable, builtin_table

DATA = Path(__file__).parent / "data"

LEMMA1_TIME_BUDGET = 300.0      # seconds, single-threaded
ANALYZE_TIME_BUDGET = 1.0       # seconds
EXPECTED_COUNTS = (1, 1, 1, 4, 56, 9408)


def report(num: int, ok: bool, what: str, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    tail = f" [{detail}]" if detail else ""
    print(f"ACCEPTANCE {num}: {status} - {what}{tail}")
    assert ok, f"criterion {num} failed: {what} {tail}"


@dataclass(frozen=True)
class LoopFacts:
    order: int
    aim_group: bool
    aim_identities: bool
    goals: tuple[bool, ...]          # in GOAL_ORDER
    n_normal: bool
    q_mod_n_abelian_group: bool
    q_mod_z_group: bool
    nilpotency_class: int | None
    lc: tuple[bool, bool, bool, bool]
    table: LoopTable | None          # kept only for AIM loops

    def goal(self, name: str) -> bool:
        return self.goals[GOAL_ORDER.index(name)]


@pytest.fixture(scope="session")
def sweep():
    """Analyze every loop of orders 1..6 once."""
    records: list[LoopFacts] = []
    counts = []
    lemma1_seconds = 0.0
    for n in range(1, 7):
        seen = 0
        for L in loop_tables(n):
            seen += 1
            t0 = time.perf_counter()
            aim_g = is_aim(L, "group")
            aim_i = is_aim(L, "identities")
            lemma1_seconds += time.perf_counter() - t0
            goals = check_goals(L)
            oracle = quotient_oracle(L)
            cls = upper_central_series(L).nilpotency_class
            records.append(LoopFacts(
                order=n,
                aim_group=aim_g,
                aim_identities=aim_i,
                goals=tuple(goals.holds[g] for g in GOAL_ORDER),
                n_normal=oracle.n_normal,
                q_mod_n_abelian_group=oracle.q_mod_n_abelian_group,
                q_mod_z_group=oracle.q_mod_z_group,
                nilpotency_class=cls,
                lc=lc_profile(L),
                table=L if aim_g else None,
            ))
        counts.append(seen)
    return {"records": records, "counts": tuple(counts),
            "lemma1_seconds": lemma1_seconds}


def test_criterion_01_worked_example(capsys):
    t0 = time.perf_counter()
    code = main(["analyze", "--fixture", "example1"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out
    checks = [
        code == 0,
        "Mlt order: 24" in out,
        "Inn: (), (3,4), (5,6), (3,4)(5,6)" in out,
        "N_left: {1,2}" in out,
        "N_right: {1,2}" in out,
        "N_middle: {1,2}" in out,
        "N: {1,2}" in out,
        "C: {1,2}" in out,
        "Z: {1,2}" in out,
        "subloops: {1}, {1,2}, {1,2,3,4,5,6}" in out,
        "series: {1} < {1,2} < {1,2,3,4,5,6}" in out,
        "class: 2" in out,
        "AIM (inner mapping group abelian): true" in out,
        elapsed < ANALYZE_TIME_BUDGET,
    ]
    with capsys.disabled():
        report(1, all(checks), "worked example reproduced exactly",
               f"analyze ran in {elapsed:.2f}s")


def test_criterion_02_aim_equivalence_exhaustive(sweep, capsys):
    mismatches = sum(1 for r in sweep["records"]
                     if r.aim_group != r.aim_identities)
    ok = (mismatches == 0 and sweep["counts"] == EXPECTED_COUNTS
          and sweep["lemma1_seconds"] < LEMMA1_TIME_BUDGET)
    with capsys.disabled():
        report(2, ok, "AIM via group = AIM via identities on all loops of order <= 6",
               f"{sum(sweep['counts'])} loops, {mismatches} mismatches, "
               f"{sweep['lemma1_seconds']:.1f}s")


def test_criterion_03_goal_suite_vs_quotients(sweep, capsys):
    checked = mismatches = 0
    for r in sweep["records"]:
        if not r.n_normal:
            continue
        checked += 1
        route_n = all(r.goal(g) for g in ("aa1", "aa2", "aa3", "aK1", "aK2", "aK3"))
        route_z = all(r.goal(g) for g in ("aa1", "aa2", "aa3", "Ka"))
        if route_n != r.q_mod_n_abelian_group or route_z != r.q_mod_z_group:
            mismatches += 1
    with capsys.disabled():
        report(3, mismatches == 0,
               "goal suite matches direct quotient construction",
               f"{checked} loops with N normal, {mismatches} mismatches")


def test_criterion_04_class_2_implies_aim(sweep, capsys):
    violations = sum(
        1 for r in sweep["records"]
        if r.nilpotency_class is not None and r.nilpotency_class <= 2
        and not r.aim_group)
    eligible = sum(1 for r in sweep["records"]
                   if r.nilpotency_class is not None and r.nilpotency_class <= 2)
    with capsys.disabled():
        report(4, violations == 0, "class <= 2 implies abelian inner mappings",
               f"{eligible} nilpotent loops of class <= 2, {violations} violations")


def test_criterion_05_group_facts(capsys):
    fixtures = [("cyclic", k) for k in range(2, 13)]
    fixtures += [("klein4", None), ("quaternion8", None)]
    fixtures += [("dihedral", k) for k in range(3, 7)]
    bad = []
    for name, k in fixtures:
        L = builtin_table(name, k)
        inner = inn(L)
        if inner.order * len(center(L)) != L.n:
            bad.append((name, k, "order"))
        cls = upper_central_series(L).nilpotency_class
        if is_abelian(inner) != (cls is not None and cls <= 2):
            bad.append((name, k, "class"))
    with capsys.disabled():
        report(5, not bad, "group fixtures: |Inn| = n/|Z| and Inn abelian iff class <= 2",
               f"{len(fixtures)} fixtures" + (f", failures: {bad}" if bad else ""))


def test_criterion_06_lc_desk_scale(sweep, capsys):
    profile_disagreements = sum(1 for r in sweep["records"] if len(set(r.lc)) != 1)
    aim_lc = [r for r in sweep["records"] if r.aim_group and r.lc[0]]
    goal_failures = sum(1 for r in aim_lc
                        if not all(r.goal(g) for g in GOAL_ORDER[:7]))
    ok = profile_disagreements == 0 and goal_failures == 0 and aim_lc
    with capsys.disabled():
        report(6, bool(ok), "every AIM LC loop satisfies all seven goals; "
               "LC identity profile is internally consistent",
               f"{len(aim_lc)} AIM LC loops, {profile_disagreements} profile splits")


def test_criterion_07_conjecture_scan(sweep, capsys):
    aim_loops = [r for r in sweep["records"] if r.aim_group]
    inconsistent = 0
    for r in aim_loops:
        rep = check_conjecture(r.table)
        if not rep.consistent_with_conjecture:
            inconsistent += 1
    classes = sorted({r.nilpotency_class for r in aim_loops})
    with capsys.disabled():
        report(7, inconsistent == 0,
               "every AIM loop of order <= 6 is consistent with the conjecture",
               f"{len(aim_loops)} AIM loops, classes seen: {classes}")


def test_criterion_08_golden_export(capsys, tmp_path):
    golden = (DATA / "default_problem.in").read_bytes()
    out = tmp_path / "default.in"
    code = main(["export", "-o", str(out)])
    byte_equal = code == 0 and out.read_bytes() == golden
    base_lines = render_problem(ProverProblem()).splitlines()
    lc_added = [l for l in render_problem(ProverProblem(variety="LC")).splitlines()
                if l not in base_lines]
    aux_added = [l for l in render_problem(
        ProverProblem(aux_assumptions=(AUX_LEFT_INNER_INVERSE,))).splitlines()
        if l not in base_lines]
    ok = (byte_equal
          and lc_added == ["   x * (x * (y * z)) = (x * (x * y)) * z.",
                           "   x * (x * (y * z)) = ((x * x) * y) * z.",
                           "   (x * x) * (y * z) = (x * (x * y)) * z.",
                           "   x * (y * (y * z)) = (x * (y * y)) * z."]
          and aux_added == ["   L(x,y,z) \\ 1 = L(x \\ 1,y,z)."])
    with capsys.disabled():
        report(8, ok, "default export is byte-identical to the golden problem file",
               f"{len(golden)} bytes; LC adds 4 lines, aux adds 1")


def test_criterion_09_p9loop_mechanism(capsys):
    orderings = ("ord-a", "ord-b", "ord-c")
    hint = "T(x,y) * z = z * T(x,y)"

    def one_run():
        adapter = MockAdapter.from_script(DATA / "hint_scenario.mock", orderings)
        outcome = p9loop_run(ProverProblem(), orderings, adapter)
        derivations = eliminate_assumptions(outcome, adapter)
        return outcome, derivations

    out1, elim1 = one_run()
    out2, elim2 = one_run()
    ok = (out1.proved and out1.iteration == 3
          and hint in out1.injected_assumptions
          and len(elim1) == 1 and elim1[0][0] == hint and elim1[0][1].proved
          and out1 == out2 and elim1 == elim2)
    with capsys.disabled():
        report(9, ok, "hint carried across orderings, then re-derived",
               f"proved at iteration {out1.iteration}, "
               f"{len(elim1)} assumption(s) eliminated")


def test_criterion_10_enumeration_oracle(sweep, capsys):
    def naive_count(n):
        import itertools
        perms = list(itertools.permutations(range(n)))
        identity = tuple(range(n))
        total = 0
        for rows in itertools.product(perms, repeat=n - 1):
            grid = (identity,) + rows
            if any(grid[i][0] != i for i in range(n)):
                continue
            if any(len({grid[i][j] for i in range(n)}) != n for j in range(n)):
                continue
            total += 1
        return total

    oracle_ok = all(naive_count(n) == EXPECTED_COUNTS[n - 1] for n in (1, 2, 3, 4))
    threads_ok = all(
        count_loops(order, workers=w) == EXPECTED_COUNTS[order - 1]
        for order in (5, 6) for w in (1, 2, 4))
    classes4 = len(dedup_classes(loop_tables(4)))
    classes5 = len(dedup_classes(loop_tables(5)))
    ok = (sweep["counts"] == EXPECTED_COUNTS and oracle_ok and threads_ok
          and classes4 == 2 and classes5 == 6)
    with capsys.disabled():
        report(10, ok, "counts match the naive oracle and are thread-stable; "
               "2 and 6 isomorphism classes at orders 4 and 5",
               f"counts {sweep['counts']}")
