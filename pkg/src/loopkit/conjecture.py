"""Associator/commutator calculus and the AIM goal suite.

An AIM loop is one whose inner mapping group is abelian.  This module
detects that two independent ways (group closure vs. pointwise identity
schemas), evaluates the eight labeled equational goals with
counterexample witnesses, cross-checks them against directly constructed
quotients, and classifies tables into the classical loop varieties.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .perms import DEFAULT_CLOSURE_CAP, Perm, commutes, compose, inverse, is_abelian
from .structure import (IllDefined, NotNormal, center, commutant, factor_loop,
                        inn, nuclei, upper_central_series)
from .tables import LoopTable, is_associative, is_commutative

GOAL_ORDER = ("aK1", "aK2", "aK3", "Ka", "aa1", "aa2", "aa3", "Kk")
BASE_GOALS = GOAL_ORDER[:7]


class InconsistentLemma2(RuntimeError):
    """The goal-suite route and the direct quotient route disagreed.

    Never expected; raised so a bug cannot hide behind a report.
    """


class InconsistentLemma1(RuntimeError):
    """The two AIM detection methods disagreed.  Never expected."""


class NoTwoSidedInverses(ValueError):
    """Inverse-dependent predicate applied where x\\1 != 1/x for some x."""


def associator(L: LoopTable, x: int, y: int, z: int) -> int:
    """[x,y,z] = (x*(y*z)) \\ ((x*y)*z); identity iff x,y,z associate."""
    rows = L.rows
    return L.ldiv(rows[x][rows[y][z]], rows[rows[x][y]][z])


def commutator(L: LoopTable, x: int, y: int) -> int:
    """[x,y] = (y*x) \\ (x*y); identity iff x and y commute."""
    rows = L.rows
    return L.ldiv(rows[y][x], rows[x][y])


def inner_t(L: LoopTable, u: int, x: int) -> int:
    """T(u,x) = x \\ (u*x); pointwise form of the conjugation-like generator."""
    return L.ldiv(x, L.rows[u][x])


def inner_l(L: LoopTable, u: int, x: int, y: int) -> int:
    """L(u,x,y) = (y*x) \\ (y*(x*u))."""
    rows = L.rows
    return L.ldiv(rows[y][x], rows[y][rows[x][u]])


def inner_r(L: LoopTable, u: int, x: int, y: int) -> int:
    """R(u,x,y) = ((u*x)*y) / (x*y)."""
    rows = L.rows
    return L.rdiv(rows[rows[u][x]][y], rows[x][y])


def inner_fn(L: LoopTable, kind: str, *args: int) -> int:
    """Dispatch on the pointwise inner functions T, L, R."""
    if kind == "T":
        return inner_t(L, *args)
    if kind == "L":
        return inner_l(L, *args)
    if kind == "R":
        return inner_r(L, *args)
    raise ValueError(f"unknown inner function kind {kind!r}")


# -- AIM detection -------------------------------------------------------------

def _t_family(L: LoopTable) -> list[Perm]:
    n = L.n
    return [tuple(inner_t(L, u, x) for u in range(n)) for x in range(n)]


def _l_family(L: LoopTable) -> list[Perm]:
    n = L.n
    return [tuple(inner_l(L, u, x, y) for u in range(n))
            for x in range(n) for y in range(n)]


def _r_family(L: LoopTable) -> list[Perm]:
    n = L.n
    return [tuple(inner_r(L, u, x, y) for u in range(n))
            for x in range(n) for y in range(n)]


def _unique(perms: list[Perm]) -> list[Perm]:
    seen: set[Perm] = set()
    out = []
    for p in perms:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _aim_via_identities(L: LoopTable) -> bool:
    """Exhaustive check of the six commutation schemas.

    T(T(u,x),y)=T(T(u,y),x) and its L/R/mixed analogues, quantified over
    every argument tuple.  Evaluated per pointwise map with duplicates
    removed, which changes the cost but not the meaning.
    """
    ts = _unique(_t_family(L))
    lls = _unique(_l_family(L))
    rrs = _unique(_r_family(L))
    for family in (ts, lls, rrs):
        for i, p in enumerate(family):
            for q in family[i + 1:]:
                if not commutes(p, q):
                    return False
    for left, right in ((ts, lls), (ts, rrs), (lls, rrs)):
        for p in left:
            for q in right:
                if not commutes(p, q):
                    return False
    return True


def is_aim(L: LoopTable, method: str = "group", cap: int = DEFAULT_CLOSURE_CAP) -> bool:
    """Whether the inner mapping group is abelian.

    method "group": enumerate Inn and test commutativity of all pairs.
    method "identities": never build the group; check the identity
    schemas on the pointwise inner functions.  The two must agree, which
    the test suite verifies exhaustively at small orders.
    """
    if method == "group":
        return is_abelian(inn(L, cap))
    if method == "identities":
        return _aim_via_identities(L)
    raise ValueError(f"unknown method {method!r}")


# -- the goal suite ------------------------------------------------------------

@dataclass(frozen=True)
class GoalReport:
    """Truth value per goal label, with one witness tuple per false goal.

    Witness tuples are 0-based element indices in the goal's variable
    order and are always the lexicographically least counterexample.
    """

    holds: dict[str, bool]
    witnesses: dict[str, tuple[int, ...]]

    @property
    def base_goals_hold(self) -> bool:
        return all(self.holds[g] for g in BASE_GOALS)

    def witness_labels(self) -> dict[str, tuple[int, ...]]:
        return {g: tuple(v + 1 for v in w) for g, w in self.witnesses.items()}


def _value_bits(values) -> int:
    bits = 0
    for v in values:
        bits |= 1 << v
    return bits


def _witness_aK(L: LoopTable, position: int):
    # goal schemas a(K(x,y),z,u), a(x,K(y,z),u), a(x,y,K(z,u)): the
    # commutator sits at `position` in the associator.
    n = L.n
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if position == 0:
                        v = associator(L, commutator(L, a, b), c, d)
                    elif position == 1:
                        v = associator(L, a, commutator(L, b, c), d)
                    else:
                        v = associator(L, a, b, commutator(L, c, d))
                    if v != 0:
                        return (a, b, c, d)
    return None


def _witness_aa(L: LoopTable, position: int):
    n = L.n
    rng = range(n)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    for e in rng:
                        if position == 0:
                            v = associator(L, associator(L, a, b, c), d, e)
                        elif position == 1:
                            v = associator(L, a, associator(L, b, c, d), e)
                        else:
                            v = associator(L, a, b, associator(L, c, d, e))
                        if v != 0:
                            return (a, b, c, d, e)
    return None


def _witness_Ka(L: LoopTable):
    n = L.n
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    if commutator(L, associator(L, a, b, c), d) != 0:
                        return (a, b, c, d)
    return None


def _witness_Kk(L: LoopTable):
    n = L.n
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if commutator(L, commutator(L, a, b), c) != 0:
                    return (a, b, c)
    return None


def check_goals(L: LoopTable) -> GoalReport:
    """Evaluate the eight goals.

    aK1/aK2/aK3: every commutator lies in the left/middle/right nucleus.
    aa1/aa2/aa3: every associator lies in the left/middle/right nucleus.
    Ka: every associator is central-commuting (lies in the commutant).
    Kk: every commutator lies in the commutant.
    Fast truth values come from membership masks; witnesses, when needed,
    come from a direct lexicographic scan of the goal's own formula.
    """
    n = L.n
    nuc = nuclei(L)
    cmask = commutant(L)
    comm_bits = _value_bits(commutator(L, x, y) for x in range(n) for y in range(n))
    assoc_bits = _value_bits(associator(L, x, y, z)
                             for x in range(n) for y in range(n) for z in range(n))
    holds = {
        "aK1": comm_bits & ~nuc.left.bits == 0,
        "aK2": comm_bits & ~nuc.middle.bits == 0,
        "aK3": comm_bits & ~nuc.right.bits == 0,
        "Ka": assoc_bits & ~cmask.bits == 0,
        "aa1": assoc_bits & ~nuc.left.bits == 0,
        "aa2": assoc_bits & ~nuc.middle.bits == 0,
        "aa3": assoc_bits & ~nuc.right.bits == 0,
        "Kk": comm_bits & ~cmask.bits == 0,
    }
    witnesses: dict[str, tuple[int, ...]] = {}
    scans = {
        "aK1": lambda: _witness_aK(L, 0),
        "aK2": lambda: _witness_aK(L, 1),
        "aK3": lambda: _witness_aK(L, 2),
        "Ka": lambda: _witness_Ka(L),
        "aa1": lambda: _witness_aa(L, 0),
        "aa2": lambda: _witness_aa(L, 1),
        "aa3": lambda: _witness_aa(L, 2),
        "Kk": lambda: _witness_Kk(L),
    }
    for goal in GOAL_ORDER:
        if not holds[goal]:
            w = scans[goal]()
            if w is None:
                raise InconsistentLemma2(f"goal {goal} judged false but no witness found")
            witnesses[goal] = w
    return GoalReport(holds, witnesses)


# -- direct quotient oracle ------------------------------------------------------

@dataclass(frozen=True)
class QuotientOracle:
    """Normality of N plus brute-force classification of Q/N and Q/Z."""

    n_normal: bool
    q_mod_n_abelian_group: bool
    q_mod_z_group: bool


def quotient_oracle(L: LoopTable) -> QuotientOracle:
    """Build the quotients outright and test them, no identity reasoning.

    Q/N is multiplied out from cosets and brute-checked for associativity
    and commutativity; likewise Q/Z for associativity.  Failure to form
    Q/N reports ``n_normal`` false.
    """
    nmask = nuclei(L).nucleus
    try:
        fn = factor_loop(L, nmask)
        n_normal = True
        q_mod_n = is_associative(fn.quotient) and is_commutative(fn.quotient)
    except (NotNormal, IllDefined):
        n_normal = False
        q_mod_n = False
    fz = factor_loop(L, center(L))
    q_mod_z = is_associative(fz.quotient)
    return QuotientOracle(n_normal, q_mod_n, q_mod_z)


# -- varieties --------------------------------------------------------------------

class Variety(enum.Enum):
    GROUP = "Group"
    ABELIAN_GROUP = "AbelianGroup"
    STEINER = "Steiner"
    EXTRA = "Extra"
    AUTOMORPHIC = "Automorphic"
    C_LOOP = "CLoop"
    CC = "CC"
    LC = "LC"
    RC = "RC"
    LEFT_BOL = "LeftBol"
    RIGHT_BOL = "RightBol"
    LCC = "LCC"
    RCC = "RCC"
    MOUFANG = "Moufang"
    LEFT_BRUCK = "LeftBruck"
    RIGHT_BRUCK = "RightBruck"

    @classmethod
    def from_name(cls, name: str) -> Variety:
        for v in cls:
            if v.value.lower() == name.lower():
                return v
        raise ValueError(f"unknown variety {name!r} (known: "
                         f"{', '.join(v.value for v in cls)})")


def _holds_all_triples(L: LoopTable, identity_fn) -> bool:
    rng = range(L.n)
    return all(identity_fn(x, y, z) for x in rng for y in rng for z in rng)


def _is_steiner(L: LoopTable) -> bool:
    rows = L.rows
    return is_commutative(L) and all(rows[x][rows[y][x]] == y
                                     for x in range(L.n) for y in range(L.n))


def _is_extra(L: LoopTable) -> bool:
    rows = L.rows
    return _holds_all_triples(
        L, lambda x, y, z: rows[x][rows[y][rows[z][x]]] == rows[rows[rows[x][y]][z]][x])


def _is_c_loop(L: LoopTable) -> bool:
    rows = L.rows
    return _holds_all_triples(
        L, lambda x, y, z: rows[rows[rows[x][y]][y]][z] == rows[x][rows[y][rows[y][z]]])


def _is_lc(L: LoopTable) -> bool:
    rows = L.rows
    return _holds_all_triples(
        L, lambda x, y, z: rows[x][rows[x][rows[y][z]]] == rows[rows[x][rows[x][y]]][z])


def _is_left_bol(L: LoopTable) -> bool:
    rows = L.rows
    return _holds_all_triples(
        L, lambda x, y, z: rows[x][rows[y][rows[x][z]]] == rows[rows[x][rows[y][x]]][z])


def _is_lcc(L: LoopTable) -> bool:
    # L_x L_y L_x^-1 must be a left translation for all x, y; if it is
    # one, it sends the identity to z, so only L_z need be compared.
    n = L.n
    ls = [L.left_translation(x) for x in range(n)]
    for x in range(n):
        lx_inv = inverse(ls[x])
        for y in range(n):
            p = compose(compose(ls[x], ls[y]), lx_inv)
            if p != ls[p[0]]:
                return False
    return True


def _has_two_sided_inverses(L: LoopTable) -> bool:
    return all(L.ldiv(x, 0) == L.rdiv(0, x) for x in range(L.n))


def _is_left_bruck(L: LoopTable) -> bool:
    if not _has_two_sided_inverses(L):
        raise NoTwoSidedInverses(
            "automorphic inverse property needs x \\ 1 = 1 / x for all x")
    if not _is_left_bol(L):
        return False
    rows = L.rows
    inv = [L.ldiv(x, 0) for x in range(L.n)]
    return all(inv[rows[x][y]] == rows[inv[x]][inv[y]]
               for x in range(L.n) for y in range(L.n))


def _is_automorphic(L: LoopTable, cap: int) -> bool:
    # Checks the full element set of Inn, not just its generators.
    rows = L.rows
    rng = range(L.n)
    for p in inn(L, cap).elements:
        for x in rng:
            px = p[x]
            for y in rng:
                if p[rows[x][y]] != rows[px][p[y]]:
                    return False
    return True


def variety_membership(L: LoopTable, variety: Variety | str,
                       cap: int = DEFAULT_CLOSURE_CAP) -> bool:
    """Exhaustive membership test for one variety.

    Right-sided varieties are decided on the mirror table with the
    left-sided predicate; the two are equivalent by reversing products.
    """
    v = Variety.from_name(variety) if isinstance(variety, str) else variety
    if v is Variety.GROUP:
        return is_associative(L)
    if v is Variety.ABELIAN_GROUP:
        return is_associative(L) and is_commutative(L)
    if v is Variety.STEINER:
        return _is_steiner(L)
    if v is Variety.EXTRA:
        return _is_extra(L)
    if v is Variety.AUTOMORPHIC:
        return _is_automorphic(L, cap)
    if v is Variety.C_LOOP:
        return _is_c_loop(L)
    if v is Variety.CC:
        return _is_lcc(L) and _is_lcc(L.opposite())
    if v is Variety.LC:
        return _is_lc(L)
    if v is Variety.RC:
        return _is_lc(L.opposite())
    if v is Variety.LEFT_BOL:
        return _is_left_bol(L)
    if v is Variety.RIGHT_BOL:
        return _is_left_bol(L.opposite())
    if v is Variety.LCC:
        return _is_lcc(L)
    if v is Variety.RCC:
        return _is_lcc(L.opposite())
    if v is Variety.MOUFANG:
        return _is_left_bol(L) and _is_left_bol(L.opposite())
    if v is Variety.LEFT_BRUCK:
        return _is_left_bruck(L)
    if v is Variety.RIGHT_BRUCK:
        return _is_left_bruck(L.opposite())
    raise ValueError(f"unhandled variety {v}")


def lc_profile(L: LoopTable) -> tuple[bool, bool, bool, bool]:
    """The four equivalent defining identities of LC loops, each checked
    independently: agreement across the profile is a theorem, not an
    assumption, and the tests confirm it at small orders."""
    rows = L.rows
    checks = (
        lambda x, y, z: rows[x][rows[x][rows[y][z]]] == rows[rows[x][rows[x][y]]][z],
        lambda x, y, z: rows[x][rows[x][rows[y][z]]] == rows[rows[rows[x][x]][y]][z],
        lambda x, y, z: rows[rows[x][x]][rows[y][z]] == rows[rows[x][rows[x][y]]][z],
        lambda x, y, z: rows[x][rows[y][rows[y][z]]] == rows[rows[x][rows[y][y]]][z],
    )
    return tuple(_holds_all_triples(L, c) for c in checks)  # type: ignore[return-value]


def is_uniquely_2_divisible(L: LoopTable) -> bool:
    """Whether squaring is a bijection of the loop."""
    squares = {L.rows[x][x] for x in range(L.n)}
    return len(squares) == L.n


# -- the structural conjecture ------------------------------------------------------

@dataclass(frozen=True)
class ConjectureReport:
    """AIM status, quotient structure and nilpotency class of one loop.

    ``consistent_with_conjecture`` is vacuously true for non-AIM loops;
    for AIM loops it requires N normal, Q/N an abelian group, Q/Z a group
    and class at most 3.
    """

    is_aim: bool
    aim_via_identities: bool
    goals: GoalReport
    n_normal: bool
    q_mod_n_abelian_group: bool
    q_mod_z_group: bool
    nilpotency_class: int | None
    consistent_with_conjecture: bool

    @property
    def goal_route_q_mod_n(self) -> bool:
        g = self.goals.holds
        return all(g[k] for k in ("aa1", "aa2", "aa3", "aK1", "aK2", "aK3"))

    @property
    def goal_route_q_mod_z(self) -> bool:
        g = self.goals.holds
        return all(g[k] for k in ("aa1", "aa2", "aa3", "Ka"))


def check_conjecture(L: LoopTable, cap: int = DEFAULT_CLOSURE_CAP) -> ConjectureReport:
    """Assemble the conjecture report and cross-check both routes.

    The goal-suite route and the direct quotient oracle must say the same
    thing about Q/N and Q/Z, and both AIM methods must agree; a mismatch
    raises instead of reporting, since it can only mean a bug.
    """
    goals = check_goals(L)
    oracle = quotient_oracle(L)
    g = goals.holds
    route_n = all(g[k] for k in ("aa1", "aa2", "aa3", "aK1", "aK2", "aK3"))
    route_z = all(g[k] for k in ("aa1", "aa2", "aa3", "Ka"))
    if oracle.n_normal and route_n != oracle.q_mod_n_abelian_group:
        raise InconsistentLemma2(
            f"Q/N: goal route says {route_n}, quotient says {oracle.q_mod_n_abelian_group}")
    if route_z != oracle.q_mod_z_group:
        raise InconsistentLemma2(
            f"Q/Z: goal route says {route_z}, quotient says {oracle.q_mod_z_group}")
    aim_group = is_aim(L, "group", cap)
    aim_ident = is_aim(L, "identities")
    if aim_group != aim_ident:
        raise InconsistentLemma1(
            f"AIM via group = {aim_group} but via identities = {aim_ident}")
    cls = upper_central_series(L).nilpotency_class
    consistent = (not aim_group) or (
        oracle.n_normal and oracle.q_mod_n_abelian_group and oracle.q_mod_z_group
        and cls is not None and cls <= 3)
    return ConjectureReport(
        is_aim=aim_group,
        aim_via_identities=aim_ident,
        goals=goals,
        n_normal=oracle.n_normal,
        q_mod_n_abelian_group=oracle.q_mod_n_abelian_group,
        q_mod_z_group=oracle.q_mod_z_group,
        nilpotency_class=cls,
        consistent_with_conjecture=consistent,
    )
