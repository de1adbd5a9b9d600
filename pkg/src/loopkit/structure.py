"""Structure theory of a finite loop.

Multiplication group, inner mapping group, nuclei, commutant, center,
subloops, normality, factor loops and the upper central series, all by
exhaustive computation over the table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .perms import (DEFAULT_CLOSURE_CAP, Perm, PermGroup, closure, compose,
                    cycle_notation, display_sort_key, inverse)
from .tables import LoopTable

MAX_SUBLOOP_ENUM_ORDER = 16
INN_DISPLAY_LIMIT = 32


class NotNormal(ValueError):
    """The subset is not invariant under all inner mappings."""


class IllDefined(RuntimeError):
    """Coset multiplication failed to be constant on coset blocks."""


@dataclass(frozen=True)
class SubsetMask:
    """A subset of loop elements as a bit mask over indices 0..n-1."""

    n: int
    bits: int

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> SubsetMask:
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise ValueError(f"index {i} out of range for order {n}")
            bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def identity_only(cls, n: int) -> SubsetMask:
        return cls(n, 1)

    @classmethod
    def full(cls, n: int) -> SubsetMask:
        return cls(n, (1 << n) - 1)

    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if self.bits >> i & 1)

    def labels(self) -> tuple[int, ...]:
        """1-based member labels."""
        return tuple(i + 1 for i in self.members())

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self.n and bool(self.bits >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members())

    def __len__(self) -> int:
        return self.bits.bit_count()

    def _check_same(self, other: SubsetMask) -> None:
        if self.n != other.n:
            raise ValueError("masks over different orders")

    def __and__(self, other: SubsetMask) -> SubsetMask:
        self._check_same(other)
        return SubsetMask(self.n, self.bits & other.bits)

    def __or__(self, other: SubsetMask) -> SubsetMask:
        self._check_same(other)
        return SubsetMask(self.n, self.bits | other.bits)

    def issubset(self, other: SubsetMask) -> bool:
        self._check_same(other)
        return self.bits & ~other.bits == 0

    def is_full(self) -> bool:
        return self.bits == (1 << self.n) - 1

    def render(self) -> str:
        return "{" + ",".join(str(v) for v in self.labels()) + "}"


# -- multiplication and inner mapping groups --------------------------------

def translation_generators(L: LoopTable) -> tuple[Perm, ...]:
    """All left translations, then all right translations."""
    n = L.n
    return tuple(L.left_translation(x) for x in range(n)) + \
        tuple(L.right_translation(x) for x in range(n))


def mlt(L: LoopTable, cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    """Multiplication group: closure of all 2n translations."""
    return closure(L.n, translation_generators(L), cap)


def inner_mapping_generators(L: LoopTable) -> tuple[Perm, ...]:
    """The standard inner mapping generators.

    With permutations composed left to right these are
    R(x,y) = R_x R_y R_{xy}^-1,  T(x) = R_x L_x^-1,  L(x,y) = L_x L_y L_{yx}^-1;
    each fixes the identity element.
    """
    n, rows = L.n, L.rows
    ls = [L.left_translation(x) for x in range(n)]
    rs = [L.right_translation(x) for x in range(n)]
    ls_inv = [inverse(p) for p in ls]
    rs_inv = [inverse(p) for p in rs]
    gens: list[Perm] = []
    for x in range(n):
        rx = rs[x]
        for y in range(n):
            gens.append(compose(compose(rx, rs[y]), rs_inv[rows[x][y]]))
    for x in range(n):
        gens.append(compose(rs[x], ls_inv[x]))
    for x in range(n):
        lx = ls[x]
        for y in range(n):
            gens.append(compose(compose(lx, ls[y]), ls_inv[rows[y][x]]))
    return tuple(gens)


def inn(L: LoopTable, cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    """Inner mapping group, generated as in ``inner_mapping_generators``.

    Coincides with the stabilizer of the identity inside ``mlt(L)``; the
    test suite checks that equality across its corpora.
    """
    return closure(L.n, inner_mapping_generators(L), cap)


# -- nuclei, commutant, center ----------------------------------------------

@dataclass(frozen=True)
class Nuclei:
    left: SubsetMask
    right: SubsetMask
    middle: SubsetMask
    nucleus: SubsetMask


def nuclei(L: LoopTable) -> Nuclei:
    """Left/right/middle nuclei and their intersection, by n^2 scans."""
    n, rows = L.n, L.rows
    rng = range(n)
    left = right = middle = 0
    for a in rng:
        ra = rows[a]
        if all(rows[ra[x]][y] == ra[rows[x][y]] for x in rng for y in rng):
            left |= 1 << a
        if all(rows[rows[x][y]][a] == rows[x][rows[y][a]] for x in rng for y in rng):
            right |= 1 << a
        if all(rows[rows[x][a]][y] == rows[x][rows[a][y]] for x in rng for y in rng):
            middle |= 1 << a
    return Nuclei(SubsetMask(n, left), SubsetMask(n, right), SubsetMask(n, middle),
                  SubsetMask(n, left & right & middle))


def commutant(L: LoopTable) -> SubsetMask:
    """Elements commuting with everything.  Not necessarily a subloop."""
    n, rows = L.n, L.rows
    bits = 0
    for a in range(n):
        if all(rows[a][x] == rows[x][a] for x in range(n)):
            bits |= 1 << a
    return SubsetMask(n, bits)


def center(L: LoopTable) -> SubsetMask:
    """Commutant intersected with the nucleus; always a normal subloop."""
    return commutant(L) & nuclei(L).nucleus


# -- subloops ----------------------------------------------------------------

def _close_bits(L: LoopTable, bits: int) -> int:
    rows = L.rows
    ld = L._ldiv_rows
    rd = L._rdiv_cols
    bits |= 1
    while True:
        members = [i for i in range(L.n) if bits >> i & 1]
        new = bits
        for x in members:
            for y in members:
                new |= 1 << rows[x][y]
                new |= 1 << ld[x][y]
                new |= 1 << rd[y][x]
        if new == bits:
            return bits
        bits = new


def subloop_generated(L: LoopTable, seed: Iterable[int] | SubsetMask) -> SubsetMask:
    """Least subloop containing the seed and the identity."""
    bits = seed.bits if isinstance(seed, SubsetMask) else 0
    if not isinstance(seed, SubsetMask):
        for i in seed:
            if not 0 <= i < L.n:
                raise ValueError(f"element {i} out of range")
            bits |= 1 << i
    return SubsetMask(L.n, _close_bits(L, bits))


def is_subloop(L: LoopTable, S: SubsetMask) -> bool:
    return bool(S.bits & 1) and _close_bits(L, S.bits) == S.bits


def all_subloops(L: LoopTable) -> tuple[SubsetMask, ...]:
    """Every subloop, sorted by size then membership.

    Worklist closure: repeatedly extend known subloops by one extra
    generator.  Only sensible at small orders.
    """
    if L.n > MAX_SUBLOOP_ENUM_ORDER:
        raise ValueError(f"subloop enumeration capped at order {MAX_SUBLOOP_ENUM_ORDER}")
    trivial = _close_bits(L, 1)
    found = {trivial}
    queue = [trivial]
    while queue:
        bits = queue.pop()
        for g in range(1, L.n):
            if bits >> g & 1:
                continue
            bigger = _close_bits(L, bits | 1 << g)
            if bigger not in found:
                found.add(bigger)
                queue.append(bigger)
    masks = [SubsetMask(L.n, b) for b in found]
    masks.sort(key=lambda m: (len(m), m.members()))
    return tuple(masks)


def is_normal(L: LoopTable, S: SubsetMask) -> bool:
    """True iff every inner mapping maps S onto S.

    Checking the generators suffices: S is finite, so invariance under
    each generator gives invariance under inverses and products.
    """
    if S.n != L.n:
        raise ValueError("mask order differs from table order")
    if not is_subloop(L, S):
        raise ValueError("is_normal needs a subloop")
    bits = S.bits
    members = S.members()
    seen: set[Perm] = set()
    for g in inner_mapping_generators(L):
        if g in seen:
            continue
        seen.add(g)
        if any(not bits >> g[s] & 1 for s in members):
            return False
    return True


def is_normal_full(L: LoopTable, S: SubsetMask, cap: int = DEFAULT_CLOSURE_CAP) -> bool:
    """Normality against every element of Inn; cross-check for ``is_normal``."""
    bits = S.bits
    members = S.members()
    return all(all(bits >> p[s] & 1 for s in members) for p in inn(L, cap).elements)


# -- factor loops -------------------------------------------------------------

@dataclass(frozen=True)
class FactorLoop:
    """Quotient table with the projection map and coset representatives."""

    quotient: LoopTable
    projection: tuple[int, ...]
    representatives: tuple[int, ...]


def factor_loop(L: LoopTable, S: SubsetMask) -> FactorLoop:
    """Quotient of L by a normal subloop S (cosets xS, representative = min).

    Raises NotNormal if S fails the inner-mapping test and IllDefined if
    coset multiplication is not constant on blocks; the latter is
    re-verified even though normality guarantees it.
    """
    if not is_normal(L, S):
        raise NotNormal(f"subloop {S.render()} is not normal")
    n, rows = L.n, L.rows
    members = S.members()
    coset_bits: dict[int, int] = {}
    block_of = [-1] * n
    for x in range(n):
        bits = 0
        for s in members:
            bits |= 1 << rows[x][s]
        coset_bits[x] = bits
    blocks: list[int] = []
    for x in range(n):
        if block_of[x] >= 0:
            continue
        bits = coset_bits[x]
        blocks.append(bits)
        idx = len(blocks) - 1
        for y in range(x, n):
            if bits >> y & 1:
                if block_of[y] >= 0 or coset_bits[y] != bits:
                    raise IllDefined("cosets do not partition the loop")
                block_of[y] = idx
    reps = sorted(min(i for i in range(n) if b >> i & 1) for b in blocks)
    rank = {r: k for k, r in enumerate(reps)}
    proj = tuple(rank[min(i for i in range(n) if blocks[block_of[x]] >> i & 1)]
                 for x in range(n))
    m = len(reps)
    qrows = [[proj[rows[reps[a]][reps[b]]] for b in range(m)] for a in range(m)]
    for x in range(n):
        px = proj[x]
        for y in range(n):
            if proj[rows[x][y]] != qrows[px][proj[y]]:
                raise IllDefined(f"product of cosets not well defined at ({x + 1},{y + 1})")
    quotient = LoopTable(qrows)
    return FactorLoop(quotient, proj, tuple(reps))


# -- upper central series ------------------------------------------------------

@dataclass(frozen=True)
class SeriesReport:
    """Ascending central series; ``nilpotency_class`` is None when it stalls."""

    terms: tuple[SubsetMask, ...]
    nilpotency_class: int | None

    @property
    def is_nilpotent(self) -> bool:
        return self.nilpotency_class is not None


def upper_central_series(L: LoopTable) -> SeriesReport:
    """Iterate preimages of centers of quotients until the loop is exhausted.

    The trivial loop gets class 0: its zeroth term is already everything.
    """
    n = L.n
    terms = [SubsetMask.identity_only(n)]
    while not terms[-1].is_full():
        fl = factor_loop(L, terms[-1])
        zq = center(fl.quotient)
        bits = 0
        for x in range(n):
            if fl.projection[x] in zq:
                bits |= 1 << x
        nxt = SubsetMask(n, bits)
        if nxt.bits == terms[-1].bits:
            return SeriesReport(tuple(terms), None)
        terms.append(nxt)
    return SeriesReport(tuple(terms), len(terms) - 1)


def nilpotency_class(L: LoopTable) -> int | None:
    return upper_central_series(L).nilpotency_class


# -- structural summary --------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    order: int
    mlt_order: int
    inn_order: int
    inn_elements: tuple[Perm, ...]
    nuclei: Nuclei
    commutant: SubsetMask
    center: SubsetMask
    subloops: tuple[SubsetMask, ...] | None
    series: SeriesReport


def structure_report(L: LoopTable, cap: int = DEFAULT_CLOSURE_CAP) -> StructureReport:
    """Bundle of everything the analyze command prints."""
    mlt_group = mlt(L, cap)
    inn_group = inn(L, cap)
    nuc = nuclei(L)
    subs = all_subloops(L) if L.n <= MAX_SUBLOOP_ENUM_ORDER else None
    return StructureReport(
        order=L.n,
        mlt_order=mlt_group.order,
        inn_order=inn_group.order,
        inn_elements=tuple(sorted(inn_group.elements, key=display_sort_key)),
        nuclei=nuc,
        commutant=commutant(L),
        center=commutant(L) & nuc.nucleus,
        subloops=subs,
        series=upper_central_series(L),
    )


def render_structure_text(r: StructureReport) -> str:
    lines = [f"order: {r.order}", f"Mlt order: {r.mlt_order}", f"Inn order: {r.inn_order}"]
    if r.inn_order <= INN_DISPLAY_LIMIT:
        lines.append("Inn: " + ", ".join(cycle_notation(p) for p in r.inn_elements))
    lines.append(f"N_left: {r.nuclei.left.render()}")
    lines.append(f"N_right: {r.nuclei.right.render()}")
    lines.append(f"N_middle: {r.nuclei.middle.render()}")
    lines.append(f"N: {r.nuclei.nucleus.render()}")
    lines.append(f"C: {r.commutant.render()}")
    lines.append(f"Z: {r.center.render()}")
    if r.subloops is None:
        lines.append(f"subloops: (skipped: order > {MAX_SUBLOOP_ENUM_ORDER})")
    else:
        lines.append("subloops: " + ", ".join(s.render() for s in r.subloops))
    lines.append("series: " + " < ".join(t.render() for t in r.series.terms))
    cls = r.series.nilpotency_class
    lines.append(f"class: {cls}" if cls is not None else "class: not nilpotent")
    return "\n".join(lines)


def structure_json(r: StructureReport) -> dict:
    return {
        "order": r.order,
        "mlt_order": r.mlt_order,
        "inn_order": r.inn_order,
        "inn_elements": ([cycle_notation(p) for p in r.inn_elements]
                         if r.inn_order <= INN_DISPLAY_LIMIT else None),
        "nuclei": {
            "left": list(r.nuclei.left.labels()),
            "right": list(r.nuclei.right.labels()),
            "middle": list(r.nuclei.middle.labels()),
            "nucleus": list(r.nuclei.nucleus.labels()),
        },
        "commutant": list(r.commutant.labels()),
        "center": list(r.center.labels()),
        "subloops": [list(s.labels()) for s in r.subloops] if r.subloops is not None else None,
        "series": [list(t.labels()) for t in r.series.terms],
        "nilpotency_class": r.series.nilpotency_class,
    }
