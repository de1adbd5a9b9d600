"""Permutations of {0..n-1} and small permutation groups.

A permutation is an image tuple acting on the right: point x goes to
``p[x]``.  ``compose(p, q)`` applies p first and then q, so products read
left to right, matching the convention that makes the inner mapping
generator formulas come out as written.

Groups are realized by full element enumeration.  Degrees here are at
most 64 and every group of interest is tiny, so exhaustive closure gives
exact element sets without stabilizer-chain machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

Perm = tuple[int, ...]

DEFAULT_CLOSURE_CAP = 1_000_000


class CapExceeded(RuntimeError):
    """Closure would enumerate more elements than the budget allows."""


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """Apply p, then q."""
    if len(p) != len(q):
        raise ValueError(f"degree mismatch: {len(p)} vs {len(q)}")
    return tuple(map(q.__getitem__, p))


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def commutes(p: Perm, q: Perm) -> bool:
    return all(q[p[x]] == p[q[x]] for x in range(len(p)))


def cycle_lengths(p: Perm) -> tuple[int, ...]:
    """Sorted cycle lengths, fixed points included."""
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        out.append(length)
    return tuple(sorted(out))


def support(p: Perm) -> tuple[int, ...]:
    return tuple(i for i, v in enumerate(p) if v != i)


def cycle_notation(p: Perm) -> str:
    """1-based cycle form, fixed points omitted: ``(1,2)(3,4)``, identity ``()``."""
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cycle = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cycle.append(j)
            seen[j] = True
            j = p[j]
        parts.append("(" + ",".join(str(k + 1) for k in cycle) + ")")
    return "".join(parts) if parts else "()"


def display_sort_key(p: Perm):
    """Order used when listing group elements: identity first, small supports early."""
    sup = support(p)
    return (len(sup), sup, p)


@dataclass(frozen=True)
class PermGroup:
    """A permutation group with its element set fully enumerated.

    ``elements`` is in deterministic breadth-first order: identity first,
    then products by generators in the order given.
    """

    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]

    @cached_property
    def element_set(self) -> frozenset[Perm]:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in self.element_set

    def __len__(self) -> int:
        return len(self.elements)


def closure(degree: int, generators: Iterable[Perm],
            cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    """Smallest group containing the generators, as an explicit element list.

    Breadth-first from the identity; raises CapExceeded once more than
    ``cap`` elements would be enumerated.
    """
    gens = tuple(generators)
    ident = tuple(range(degree))
    for g in gens:
        if len(g) != degree:
            raise ValueError(f"generator degree {len(g)} != {degree}")
    unique = []
    seen_gen = {ident}
    for g in gens:
        if g not in seen_gen:
            seen_gen.add(g)
            unique.append(g)
    elements = [ident]
    seen = {ident}
    i = 0
    while i < len(elements):
        p = elements[i]
        i += 1
        for g in unique:
            q = tuple(map(g.__getitem__, p))
            if q not in seen:
                if len(elements) >= cap:
                    raise CapExceeded(f"group closure exceeds {cap} elements")
                seen.add(q)
                elements.append(q)
    return PermGroup(degree, gens, tuple(elements))


def is_abelian(G: PermGroup) -> bool:
    """True iff every pair of elements commutes."""
    elems = G.elements
    for i in range(1, len(elems)):
        p = elems[i]
        for j in range(i + 1, len(elems)):
            if not commutes(p, elems[j]):
                return False
    return True


def stabilizer(G: PermGroup, point: int) -> PermGroup:
    """Subgroup of elements fixing ``point``, in the parent's element order."""
    if not 0 <= point < G.degree:
        raise ValueError(f"point {point} out of range for degree {G.degree}")
    fixed = tuple(p for p in G.elements if p[point] == point)
    return PermGroup(G.degree, fixed, fixed)


def orbit(G: PermGroup, point: int) -> frozenset[int]:
    return frozenset(p[point] for p in G.elements)
