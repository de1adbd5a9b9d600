"""Equational prover input files and the ordering-iteration driver.

``render_problem`` emits the standard AIM problem: loop axioms in the
three-operation signature, defining equations for the associator a, the
commutator K and the pointwise inner functions L, R, T, compatibility
implications, the six commutation schemas as assumptions, and the labeled
goals.  The default rendering is pinned byte-for-byte by a golden file in
the test suite.

``p9loop_run`` drives an external prover through a list of term-ordering
directives: run until a proof or a limit, then restart with the next
ordering, feeding every hint-matching clause gathered so far back in as
an input assumption.  ``eliminate_assumptions`` afterwards re-derives the
injected clauses one by one so the final proof rests only on the original
assumptions.

All prover specifics live behind a small adapter interface; a scripted
mock ships for tests and a subprocess adapter runs a real executable.
"""

from __future__ import annotations

import os
import re
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Protocol, Sequence

GOAL_CLAUSES: dict[str, str] = {
    "aK1": "a(K(x,y),z,u) = 1",
    "aK2": "a(x,K(y,z),u) = 1",
    "aK3": "a(x,y,K(z,u)) = 1",
    "Ka": "K(a(x,y,z),u) = 1",
    "aa1": "a(a(x,y,z),u,w) = 1",
    "aa2": "a(x,a(y,z,u),w) = 1",
    "aa3": "a(x,y,a(z,u,w)) = 1",
    "Kk": "K(K(x,y),z) = 1",
}

DEFAULT_GOALS = ("aK1", "aK2", "aK3", "Ka", "aa1", "aa2", "aa3")

BASE_ASSUMPTIONS = """\
   1 * x = x.           x * 1 = x.
   x \\ (x * y) = y.     x * (x \\ y) = y.
   (x * y) / y = x.     (x / y) * y = x.

   (x * (y * z)) \\ ((x * y) * z) = a(x,y,z).

   (x * y) \\ (y * x) = K(y,x).

   (y * x) \\ (y * (x * u)) = L(u,x,y).

   ((u * x) * y) / (x * y) = R(u,x,y).

   x \\ (u * x) = T(u,x).

   a(x,y,z) = 1 -> L(z,y,x) = z.    L(x,y,z) = x -> a(z,y,x) = 1.
   T(x,y) = x -> T(y,x) = y.        T(x,y) = x -> K(x,y) = 1.
   K(x,y) = 1 -> T(x,y) = x.

   T(T(u,x),y) = T(T(u,y),x).
   L(L(u,x,y),z,w) = L(L(u,z,w),x,y).
   R(R(u,x,y),z,w) = R(R(u,z,w),x,y).
   T(L(u,x,y),z) = L(T(u,z),x,y).
   T(R(u,x,y),z) = R(T(u,z),x,y).
   L(R(u,x,y),z,w) = R(L(u,z,w),x,y)."""

AUX_LEFT_INNER_INVERSE = "L(x,y,z) \\ 1 = L(x \\ 1,y,z)."

# Defining equations per variety, in the problem's clause syntax.  The
# identity-defined varieties are verbatim; conjugacy closure uses the
# standard division form, and the automorphic axioms say the three inner
# function families are multiplicative (they generate all inner maps).
_LC_AXIOMS = (
    "x * (x * (y * z)) = (x * (x * y)) * z.",
    "x * (x * (y * z)) = ((x * x) * y) * z.",
    "(x * x) * (y * z) = (x * (x * y)) * z.",
    "x * (y * (y * z)) = (x * (y * y)) * z.",
)
_RC_AXIOMS = (
    "((z * y) * x) * x = z * ((y * x) * x).",
    "((z * y) * x) * x = z * (y * (x * x)).",
    "(z * y) * (x * x) = z * ((y * x) * x).",
    "((z * y) * y) * x = z * ((y * y) * x).",
)
_LEFT_BOL = "x * (y * (x * z)) = (x * (y * x)) * z."
_RIGHT_BOL = "((z * x) * y) * x = z * ((x * y) * x)."
_LCC_AXIOM = "x * (y * z) = ((x * y) / x) * (x * z)."
_RCC_AXIOM = "(z * y) * x = (z * x) * (x \\ (y * x))."
_AIP = "(x * y) \\ 1 = (x \\ 1) * (y \\ 1)."
_AIP_DUAL = "1 / (y * x) = (1 / y) * (1 / x)."

VARIETY_AXIOMS: dict[str, tuple[str, ...]] = {
    "Group": ("(x * y) * z = x * (y * z).",),
    "AbelianGroup": ("(x * y) * z = x * (y * z).", "x * y = y * x."),
    "Steiner": ("x * y = y * x.", "x * (y * x) = y."),
    "Extra": ("x * (y * (z * x)) = ((x * y) * z) * x.",),
    "Automorphic": (
        "T(x * y,z) = T(x,z) * T(y,z).",
        "L(x * y,z,u) = L(x,z,u) * L(y,z,u).",
        "R(x * y,z,u) = R(x,z,u) * R(y,z,u).",
    ),
    "CLoop": ("((x * y) * y) * z = x * (y * (y * z)).",),
    "CC": (_LCC_AXIOM, _RCC_AXIOM),
    "LC": _LC_AXIOMS,
    "RC": _RC_AXIOMS,
    "LeftBol": (_LEFT_BOL,),
    "RightBol": (_RIGHT_BOL,),
    "LCC": (_LCC_AXIOM,),
    "RCC": (_RCC_AXIOM,),
    "Moufang": (_LEFT_BOL, _RIGHT_BOL),
    "LeftBruck": (_LEFT_BOL, _AIP),
    "RightBruck": (_RIGHT_BOL, _AIP_DUAL),
}

_GOAL_PAD = 31


class EmptyOrderingList(ValueError):
    """p9loop needs at least one term ordering directive."""


class AdapterFailure(RuntimeError):
    """The external prover could not be launched or crashed.

    ``iteration`` is filled in by the driver; ``diagnostics`` keeps
    whatever output was captured.
    """

    def __init__(self, message: str, *, diagnostics: str = ""):
        super().__init__(message)
        self.diagnostics = diagnostics
        self.iteration: int | None = None


@dataclass(frozen=True)
class ProverProblem:
    """A renderable problem: fixed base clauses plus optional additions.

    ``goals`` are labels from GOAL_CLAUSES; ``custom_goals`` carries
    (clause, label) pairs for ad-hoc targets such as assumption
    elimination.  ``extra_assumptions`` holds injected hint matchers,
    verbatim.
    """

    base: str = BASE_ASSUMPTIONS
    variety: str | None = None
    aux_assumptions: tuple[str, ...] = ()
    extra_assumptions: tuple[str, ...] = ()
    goals: tuple[str, ...] = DEFAULT_GOALS
    custom_goals: tuple[tuple[str, str], ...] = ()
    directives: tuple[str, ...] = ()

    def __post_init__(self):
        for g in self.goals:
            if g not in GOAL_CLAUSES:
                raise ValueError(f"unknown goal label {g!r}")
        if not self.goals and not self.custom_goals:
            raise ValueError("a problem needs at least one goal")
        if self.variety is not None and self.variety not in VARIETY_AXIOMS:
            raise ValueError(f"no axioms on file for variety {self.variety!r}")

    @property
    def variety_axioms(self) -> tuple[str, ...]:
        return VARIETY_AXIOMS[self.variety] if self.variety else ()

    def with_injected(self, clauses: Sequence[str]) -> ProverProblem:
        return replace(self, extra_assumptions=self.extra_assumptions + tuple(clauses))


def _clause_line(clause: str) -> str:
    clause = clause.rstrip()
    if not clause.endswith("."):
        clause += "."
    return "   " + clause


def _goal_line(formula: str, label: str) -> str:
    formula = formula.rstrip().rstrip(".")
    padded = formula.ljust(_GOAL_PAD)
    if len(padded) == len(formula):
        padded += " "
    return "   " + padded + f'# label("{label}").'


def render_problem(p: ProverProblem) -> str:
    """Deterministic text rendering of a problem."""
    lines: list[str] = []
    for d in p.directives:
        lines.append(d if d.rstrip().endswith(".") else d.rstrip() + ".")
    if p.directives:
        lines.append("")
    lines.append("formulas(assumptions).")
    lines.append("")
    lines.extend(p.base.split("\n"))
    for group in (p.variety_axioms, p.aux_assumptions, p.extra_assumptions):
        if group:
            lines.append("")
            lines.extend(_clause_line(c) for c in group)
    lines.append("end_of_list.")
    lines.append("")
    lines.append("formulas(goals).")
    for g in p.goals:
        lines.append(_goal_line(GOAL_CLAUSES[g], g))
    for clause, label in p.custom_goals:
        lines.append(_goal_line(clause, label))
    lines.append("end_of_list.")
    return "\n".join(lines) + "\n"


def parse_problem(text: str) -> ProverProblem:
    """Light parse of a rendered problem back into a ProverProblem.

    The assumptions block is kept verbatim as the base; goal lines must
    carry ``# label("...")`` annotations.  Files produced by
    ``render_problem`` round-trip byte for byte.
    """
    lines = text.split("\n")
    try:
        a0 = lines.index("formulas(assumptions).")
        a1 = lines.index("end_of_list.", a0)
        g0 = lines.index("formulas(goals).", a1)
        g1 = lines.index("end_of_list.", g0)
    except ValueError:
        raise ValueError("input lacks assumptions/goals blocks") from None
    body = lines[a0 + 1:a1]
    if body and body[0] == "":
        body = body[1:]
    while body and body[-1] == "":
        body = body[:-1]
    goal_re = re.compile(r'^\s*(.*?)\s*#\s*label\("([^"]+)"\)\.\s*$')
    custom: list[tuple[str, str]] = []
    for line in lines[g0 + 1:g1]:
        if not line.strip():
            continue
        m = goal_re.match(line)
        if not m:
            raise ValueError(f"goal line without label: {line!r}")
        custom.append((m.group(1).rstrip("."), m.group(2)))
    if not custom:
        raise ValueError("no goals in input")
    return ProverProblem(base="\n".join(body), goals=(), custom_goals=tuple(custom))


def _assumptions_section(problem_text: str) -> str:
    head, _, _ = problem_text.partition("formulas(goals).")
    return head


# -- adapters ------------------------------------------------------------------

@dataclass(frozen=True)
class AdapterResult:
    proved: bool
    proof_text: str | None
    hint_matchers: tuple[str, ...]


@dataclass(frozen=True)
class RunLimits:
    max_seconds: float | None = None
    max_iterations: int | None = None


class ProverAdapter(Protocol):
    def launch(self, problem_text: str, directive: str,
               limits: RunLimits) -> AdapterResult: ...


@dataclass(frozen=True)
class MockRecord:
    proved: bool
    requires: tuple[str, ...] = ()
    emits_hints: tuple[str, ...] = ()


class MockAdapter:
    """Scripted stand-in for an external prover.

    The script has one record per directive index (1-based position in
    the orderings list)::

        # comment
        1 | proved: no
        2 | proved: no | emits-hints: T(x,y) * z = z * T(x,y)
        3 | proved: yes | requires: T(x,y) * z = z * T(x,y)

    Clause lists are ';'-separated.  A record proves only if every
    ``requires`` clause occurs in the assumptions section of the problem
    text; otherwise the run fails and emits its hints.  Directives with
    no record fail silently.  Launch is a pure function of its inputs.
    """

    def __init__(self, records: dict[int, MockRecord], orderings: Sequence[str]):
        self.records = dict(records)
        index: dict[str, int] = {}
        for i, d in enumerate(orderings, 1):
            if d in index:
                raise ValueError(f"duplicate directive {d!r}; the mock needs distinct ones")
            index[d] = i
        self._index = index

    @classmethod
    def from_script(cls, path: str | Path, orderings: Sequence[str]) -> MockAdapter:
        return cls(parse_mock_script(Path(path).read_text()), orderings)

    def launch(self, problem_text: str, directive: str, limits: RunLimits) -> AdapterResult:
        idx = self._index.get(directive)
        rec = self.records.get(idx) if idx is not None else None
        if rec is None:
            return AdapterResult(False, None, ())
        assumptions = _assumptions_section(problem_text)
        if rec.proved and all(req in assumptions for req in rec.requires):
            proof = "\n".join(["mock proof", f"directive: {directive}",
                               *rec.requires])
            return AdapterResult(True, proof, ())
        return AdapterResult(False, None, rec.emits_hints)


def parse_mock_script(text: str) -> dict[int, MockRecord]:
    records: dict[int, MockRecord] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split("|")]
        try:
            idx = int(parts[0])
        except ValueError:
            raise ValueError(f"line {lineno}: record must start with a directive index") from None
        proved: bool | None = None
        requires: tuple[str, ...] = ()
        emits: tuple[str, ...] = ()
        for part in parts[1:]:
            key, _, value = part.partition(":")
            key = key.strip()
            value = value.strip()
            if key == "proved":
                if value not in ("yes", "no"):
                    raise ValueError(f"line {lineno}: proved must be yes or no")
                proved = value == "yes"
            elif key == "requires":
                requires = tuple(c.strip() for c in value.split(";") if c.strip())
            elif key == "emits-hints":
                emits = tuple(c.strip() for c in value.split(";") if c.strip())
            else:
                raise ValueError(f"line {lineno}: unknown field {key!r}")
        if proved is None:
            raise ValueError(f"line {lineno}: missing proved field")
        records[idx] = MockRecord(proved, requires, emits)
    return records


PROVER_ENV_VAR = "LOOPKIT_PROVER"

_PROVED_MARKER = "THEOREM PROVED"
_PROOF_START = re.compile(r"=+ PROOF =+")
_PROOF_END = re.compile(r"=+ end of proof =+")
# given-clause lines whose selection tag is H (hint match), e.g.
#   given #12 (H,wt=9): 57 T(x,y) * z = z * T(x,y).  [para(3,5)].
_HINT_GIVEN = re.compile(r"^given #\d+ \(H[^)]*\):\s+(.*)$")
_CLAUSE_ID = re.compile(r"^\d+\s+")
_JUSTIFICATION = re.compile(r"\s*\[[^\[\]]*\]\.?\s*$")


class ExecAdapter:
    """Runs an external prover command on a rendered problem file.

    The command template may use ``{input}`` for the problem path (it is
    appended when absent) and is overridden by the LOOPKIT_PROVER
    environment variable.  The directive is prepended to the problem text
    as its own line.  Output parsing is best effort against the markers
    documented above: a "THEOREM PROVED" line decides success, the PROOF
    block is captured verbatim, and hint matchers are read from given
    lines with the H selection tag.
    """

    def __init__(self, command_template: str):
        override = os.environ.get(PROVER_ENV_VAR)
        self.command_template = override if override else command_template

    def launch(self, problem_text: str, directive: str, limits: RunLimits) -> AdapterResult:
        text = directive.rstrip() + "\n\n" + problem_text if directive else problem_text
        with tempfile.NamedTemporaryFile("w", suffix=".in", delete=False) as fh:
            fh.write(text)
            path = fh.name
        try:
            if "{input}" in self.command_template:
                cmd = self.command_template.replace("{input}", shlex.quote(path))
            else:
                cmd = f"{self.command_template} {shlex.quote(path)}"
            try:
                proc = subprocess.run(
                    shlex.split(cmd), capture_output=True, text=True,
                    timeout=limits.max_seconds)
                output = proc.stdout + proc.stderr
            except subprocess.TimeoutExpired as exc:
                output = (exc.stdout or "") + (exc.stderr or "")
                if isinstance(output, bytes):
                    output = output.decode(errors="replace")
            except OSError as exc:
                raise AdapterFailure(f"cannot run prover: {exc}") from exc
        finally:
            os.unlink(path)
        return AdapterResult(
            proved=_PROVED_MARKER in output,
            proof_text=self._extract_proof(output),
            hint_matchers=self._extract_hints(output),
        )

    @staticmethod
    def _extract_proof(output: str) -> str | None:
        lines = output.splitlines()
        start = end = None
        for i, line in enumerate(lines):
            if start is None and _PROOF_START.search(line):
                start = i
            elif start is not None and _PROOF_END.search(line):
                end = i
                break
        if start is None or end is None:
            return None
        return "\n".join(lines[start + 1:end])

    @staticmethod
    def _extract_hints(output: str) -> tuple[str, ...]:
        hints = []
        for line in output.splitlines():
            m = _HINT_GIVEN.match(line)
            if not m:
                continue
            clause = _CLAUSE_ID.sub("", m.group(1).strip())
            clause = _JUSTIFICATION.sub("", clause)
            if clause:
                hints.append(clause)
        return tuple(hints)


# -- the driver ------------------------------------------------------------------

@dataclass(frozen=True)
class IterationLog:
    index: int
    directive: str
    proved: bool
    hints: tuple[str, ...]
    injected_before: tuple[str, ...]


@dataclass(frozen=True)
class P9LoopOutcome:
    """Result of one driver run, with enough context to re-run pieces."""

    proved: bool
    iteration: int | None
    proof_text: str | None
    iterations: tuple[IterationLog, ...]
    injected_assumptions: tuple[str, ...]
    problem: ProverProblem
    orderings: tuple[str, ...]

    @property
    def verdict(self) -> str:
        return f"proved (iteration {self.iteration})" if self.proved else "exhausted"


def p9loop_run(problem: ProverProblem, orderings: Sequence[str],
               adapter: ProverAdapter, limits: RunLimits = RunLimits()) -> P9LoopOutcome:
    """Iterate term orderings, carrying hint matchers forward.

    Each iteration renders the problem with every previously gathered
    hint matcher added as an assumption and launches the adapter with the
    next directive.  Stops at the first proof or when the directives run
    out.
    """
    orderings = tuple(orderings)
    if not orderings:
        raise EmptyOrderingList("no term ordering directives given")
    if limits.max_iterations is not None:
        orderings_used = orderings[:limits.max_iterations]
    else:
        orderings_used = orderings
    injected: list[str] = []
    logs: list[IterationLog] = []
    for k, directive in enumerate(orderings_used, 1):
        text = render_problem(problem.with_injected(injected))
        try:
            res = adapter.launch(text, directive, limits)
        except AdapterFailure as exc:
            exc.iteration = k
            raise
        logs.append(IterationLog(k, directive, res.proved, res.hint_matchers,
                                 tuple(injected)))
        if res.proved:
            return P9LoopOutcome(True, k, res.proof_text, tuple(logs),
                                 tuple(injected), problem, orderings)
        for h in res.hint_matchers:
            if h not in injected:
                injected.append(h)
    return P9LoopOutcome(False, None, None, tuple(logs), tuple(injected),
                         problem, orderings)


def eliminate_assumptions(outcome: P9LoopOutcome, adapter: ProverAdapter,
                          limits: RunLimits = RunLimits()) -> list[tuple[str, P9LoopOutcome]]:
    """Re-derive injected assumptions that the final proof leaned on.

    Each such clause becomes the goal of a fresh driver run that may use
    the remaining injected clauses; clauses used by those sub-proofs are
    queued in turn, until everything is derived or a sub-run fails.
    Returns (assumption, sub-outcome) pairs in processing order.
    """
    if not outcome.proved:
        raise ValueError("nothing to eliminate: the run did not prove its goal")

    def used_in(proof: str | None, pool: Sequence[str]) -> list[str]:
        if proof is None:
            return list(pool)
        return [c for c in pool if c in proof]

    results: list[tuple[str, P9LoopOutcome]] = []
    done: set[str] = set()
    queue = used_in(outcome.proof_text, outcome.injected_assumptions)
    while queue:
        clause = queue.pop(0)
        if clause in done:
            continue
        done.add(clause)
        others = tuple(c for c in outcome.injected_assumptions if c != clause)
        sub_problem = replace(outcome.problem, goals=(),
                              custom_goals=((clause, "elim"),),
                              extra_assumptions=outcome.problem.extra_assumptions + others)
        sub = p9loop_run(sub_problem, outcome.orderings, adapter, limits)
        results.append((clause, sub))
        if sub.proved:
            for h in used_in(sub.proof_text, sub.injected_assumptions):
                if h not in done:
                    queue.append(h)
    return results
