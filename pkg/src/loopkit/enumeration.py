"""Exhaustive generation of small loops.

Loops of order n correspond to reduced Latin squares: first row and
column in natural order.  The generator backtracks row by row with
column-availability masks and emits tables in strict lexicographic
(row-major) order, so a rerun reproduces the exact same stream.

Known stream lengths for orders 1..6 are 1, 1, 1, 4, 56, 9408; the test
suite re-derives the small ones with an independent naive generator.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from . import conjecture
from .perms import cycle_lengths
from .tables import LoopTable, is_associative, is_commutative

MAX_ENUM_ORDER = 7
MAX_ANALYSIS_FILTER_ORDER = 6
MAX_ISO_ORDER = 8
MAX_DEDUP_ORDER = 6

Predicate = Callable[[LoopTable], bool]


@dataclass(frozen=True)
class EnumSpec:
    """An enumeration request: order, filter ids, and output mode."""

    order: int
    filters: tuple[str, ...] = ()
    mode: str = "emit"  # emit | count | first

    def __post_init__(self):
        if self.mode not in ("emit", "count", "first"):
            raise ValueError(f"unknown mode {self.mode!r}")


_CHEAP_FILTERS: dict[str, Predicate] = {
    "associative": is_associative,
    "nonassociative": lambda L: not is_associative(L),
    "commutative": is_commutative,
    "noncommutative": lambda L: not is_commutative(L),
}


def filter_predicate(fid: str) -> Predicate:
    """Resolve a filter id to a table predicate.

    Supported: associative, nonassociative, commutative, noncommutative,
    aim, nilpotent, class<=K, variety:NAME.
    """
    if fid in _CHEAP_FILTERS:
        return _CHEAP_FILTERS[fid]
    if fid == "aim":
        return lambda L: conjecture.is_aim(L, "identities")
    if fid == "nilpotent":
        return lambda L: conjecture.upper_central_series(L).is_nilpotent
    if fid.startswith("class<="):
        k = int(fid[len("class<="):])
        def class_at_most(L, k=k):
            c = conjecture.upper_central_series(L).nilpotency_class
            return c is not None and c <= k
        return class_at_most
    if fid.startswith("variety:"):
        v = conjecture.Variety.from_name(fid[len("variety:"):])
        return lambda L: conjecture.variety_membership(L, v)
    raise ValueError(f"unknown filter {fid!r}")


def _is_heavy(fid: str) -> bool:
    return fid not in _CHEAP_FILTERS


def _check_spec(order: int, filters: Iterable[str]) -> tuple[Predicate, ...]:
    if order < 1:
        raise ValueError("order must be at least 1")
    if order > MAX_ENUM_ORDER:
        raise ValueError(f"exhaustive enumeration capped at order {MAX_ENUM_ORDER}")
    fids = tuple(filters)
    if order > MAX_ANALYSIS_FILTER_ORDER and any(_is_heavy(f) for f in fids):
        raise ValueError(
            f"analysis filters are capped at order {MAX_ANALYSIS_FILTER_ORDER}")
    return tuple(filter_predicate(f) for f in fids)


def _row_candidates(n: int, r: int, col_used: list[int]) -> Iterator[tuple[int, ...]]:
    """All valid rows for index r given column masks, ascending."""
    full = (1 << n) - 1
    row = [r] + [0] * (n - 1)

    def fill(c: int, row_used: int) -> Iterator[tuple[int, ...]]:
        if c == n:
            yield tuple(row)
            return
        free = ~(row_used | col_used[c]) & full
        while free:
            bit = free & -free
            free ^= bit
            v = bit.bit_length() - 1
            row[c] = v
            yield from fill(c + 1, row_used | bit)

    if not col_used[0] >> r & 1:
        yield from fill(1, 1 << r)


def _complete(n: int, rows: list[tuple[int, ...]],
              col_used: list[int]) -> Iterator[LoopTable]:
    r = len(rows)
    if r == n:
        # revalidation is cheap insurance against generator bugs
        yield LoopTable(rows, validate=True)
        return
    for row in _row_candidates(n, r, col_used):
        rows.append(row)
        for c in range(n):
            col_used[c] |= 1 << row[c]
        yield from _complete(n, rows, col_used)
        for c in range(n):
            col_used[c] &= ~(1 << row[c])
        rows.pop()


def _tables(n: int, fixed_row1: tuple[int, ...] | None = None) -> Iterator[LoopTable]:
    rows = [tuple(range(n))]
    col_used = [1 << j for j in range(n)]
    if fixed_row1 is not None:
        rows.append(fixed_row1)
        for c in range(n):
            col_used[c] |= 1 << fixed_row1[c]
    yield from _complete(n, rows, col_used)


def loop_tables(order: int, filters: Iterable[str] = ()) -> Iterator[LoopTable]:
    """Stream every loop of the given order passing all filters, in
    lexicographic order."""
    preds = _check_spec(order, filters)
    for L in _tables(order):
        if all(p(L) for p in preds):
            yield L


def first_loop(order: int, filters: Iterable[str] = ()) -> LoopTable | None:
    return next(loop_tables(order, filters), None)


def _count_prefix(args: tuple[int, tuple[int, ...], tuple[str, ...]]) -> int:
    order, row1, filters = args
    preds = tuple(filter_predicate(f) for f in filters)
    k = 0
    for L in _tables(order, row1):
        if all(p(L) for p in preds):
            k += 1
    return k


def count_loops(order: int, filters: Iterable[str] = (), workers: int = 1) -> int:
    """Count matching loops; with workers > 1 the search space is split by
    the second row and counted in parallel worker processes."""
    fids = tuple(filters)
    _check_spec(order, fids)
    if workers <= 1 or order == 1:
        return sum(1 for _ in loop_tables(order, fids))
    prefixes = list(_tables_prefixes(order))
    jobs = [(order, p, fids) for p in prefixes]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_count_prefix, jobs))


def _tables_prefixes(order: int) -> Iterator[tuple[int, ...]]:
    col_used = [1 << j for j in range(order)]
    yield from _row_candidates(order, 1, col_used)


def run(spec: EnumSpec, workers: int = 1):
    """Dispatch an EnumSpec: an iterator, a count, or the first match."""
    if spec.mode == "count":
        return count_loops(spec.order, spec.filters, workers)
    if spec.mode == "first":
        return first_loop(spec.order, spec.filters)
    return loop_tables(spec.order, spec.filters)


# -- isomorphism -----------------------------------------------------------------

def _fingerprint(L: LoopTable, x: int) -> tuple:
    return (cycle_lengths(L.left_translation(x)), cycle_lengths(L.right_translation(x)))


def are_isomorphic(A: LoopTable, B: LoopTable) -> bool:
    """Whether some identity-fixing bijection carries A's table to B's.

    Backtracking over images, pruned by per-element translation
    fingerprints; a full multiplication check runs at every leaf.
    """
    if A.n != B.n:
        raise ValueError("tables have different orders")
    n = A.n
    if n > MAX_ISO_ORDER:
        raise ValueError(f"isomorphism test capped at order {MAX_ISO_ORDER}")
    fa = [_fingerprint(A, x) for x in range(n)]
    fb = [_fingerprint(B, x) for x in range(n)]
    if sorted(fa) != sorted(fb):
        return False
    candidates = [[y for y in range(n) if fb[y] == fa[x]] for x in range(n)]
    img = [-1] * n
    img[0] = 0
    arows, brows = A.rows, B.rows

    def consistent(x: int) -> bool:
        for a in range(n):
            ia = img[a]
            if ia < 0:
                continue
            p = img[arows[a][x]]
            if p >= 0 and brows[ia][img[x]] != p:
                return False
            p = img[arows[x][a]]
            if p >= 0 and brows[img[x]][ia] != p:
                return False
        return True

    def extend(x: int, used: int) -> bool:
        if x == n:
            return all(img[arows[a][b]] == brows[img[a]][img[b]]
                       for a in range(n) for b in range(n))
        for y in candidates[x]:
            if used >> y & 1:
                continue
            img[x] = y
            if consistent(x) and extend(x + 1, used | 1 << y):
                return True
            img[x] = -1
        return False

    return extend(1, 1)


def dedup_classes(tables: Iterable[LoopTable]) -> list[tuple[LoopTable, int]]:
    """Group tables into isomorphism classes by pairwise comparison.

    Returns (representative, class size) pairs; representatives are the
    lexicographically least members, classes sorted by representative.
    """
    pool = sorted(tables, key=lambda L: L.rows)
    if pool and pool[0].n > MAX_DEDUP_ORDER:
        raise ValueError(f"class grouping capped at order {MAX_DEDUP_ORDER}")
    if any(L.n != pool[0].n for L in pool):
        raise ValueError("tables must share one order")
    reps: list[LoopTable] = []
    sizes: list[int] = []
    for L in pool:
        for i, rep in enumerate(reps):
            if are_isomorphic(rep, L):
                sizes[i] += 1
                break
        else:
            reps.append(L)
            sizes.append(1)
    return list(zip(reps, sizes))
