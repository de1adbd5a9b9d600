"""Multiplication tables of finite loops.

A loop is a quasigroup with a two-sided identity element: its
multiplication table is a Latin square whose first row and first column
repeat the element labels in order.  Elements are stored 0-based with the
identity at index 0; all parsing and rendering uses 1-based labels.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

# Subset masks fit in a machine word and every algorithm downstream is an
# exhaustive scan, so larger tables are refused outright.
MAX_ORDER = 64


class ParseError(ValueError):
    """Malformed table source.

    ``kind`` is one of ``BadDimension``, ``BadToken``, ``NotLatin``,
    ``NoIdentity``.  ``row``, ``col`` and ``value`` are 1-based and filled
    in where they apply; a ``NotLatin`` error carries the first offending
    (row, value) pair.
    """

    def __init__(self, kind: str, message: str, *, row: int | None = None,
                 col: int | None = None, value: int | None = None):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.row = row
        self.col = col
        self.value = value


def _invert(seq: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(seq)
    for i, v in enumerate(seq):
        inv[v] = i
    return tuple(inv)


def _check_table(rows: tuple[tuple[int, ...], ...]) -> None:
    n = len(rows)
    if n == 0:
        raise ParseError("BadDimension", "empty table")
    if n > MAX_ORDER:
        raise ParseError("BadDimension", f"order {n} exceeds the cap of {MAX_ORDER}")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError("BadDimension", f"row {i + 1} has {len(row)} entries, expected {n}",
                             row=i + 1)
        for j, v in enumerate(row):
            if not isinstance(v, int) or not 0 <= v < n:
                raise ParseError("BadToken", f"entry at row {i + 1}, column {j + 1} is not in 1..{n}",
                                 row=i + 1, col=j + 1)
    for i, row in enumerate(rows):
        seen = 0
        for v in row:
            if seen >> v & 1:
                raise ParseError("NotLatin", f"value {v + 1} repeats in row {i + 1}",
                                 row=i + 1, value=v + 1)
            seen |= 1 << v
    identity = tuple(range(n))
    if rows[0] != identity:
        raise ParseError("NoIdentity", "first row is not in natural order", row=1)
    if tuple(row[0] for row in rows) != identity:
        raise ParseError("NoIdentity", "first column is not in natural order", col=1)
    for j in range(n):
        seen = 0
        for i in range(n):
            v = rows[i][j]
            if seen >> v & 1:
                raise ParseError("NotLatin", f"value {v + 1} repeats in column {j + 1}",
                                 row=i + 1, value=v + 1)
            seen |= 1 << v


class LoopTable:
    """Immutable n x n loop table; ``rows[x][y]`` is the product x*y."""

    def __init__(self, rows: Iterable[Iterable[int]], *, validate: bool = True):
        self.rows: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        if validate:
            _check_table(self.rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LoopTable) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"LoopTable(n={self.n})"

    # -- the three quasigroup operations ---------------------------------

    def mul(self, x: int, y: int) -> int:
        return self.rows[x][y]

    def ldiv(self, x: int, y: int) -> int:
        """The unique z with x*z = y."""
        return self._ldiv_rows[x][y]

    def rdiv(self, x: int, y: int) -> int:
        """The unique z with z*y = x."""
        return self._rdiv_cols[y][x]

    @cached_property
    def _ldiv_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(_invert(row) for row in self.rows)

    @cached_property
    def _columns(self) -> tuple[tuple[int, ...], ...]:
        n = self.n
        return tuple(tuple(self.rows[i][j] for i in range(n)) for j in range(n))

    @cached_property
    def _rdiv_cols(self) -> tuple[tuple[int, ...], ...]:
        return tuple(_invert(col) for col in self._columns)

    # -- translations -----------------------------------------------------

    def left_translation(self, x: int) -> tuple[int, ...]:
        """The permutation y -> x*y (as an image tuple, acting on the right)."""
        return self.rows[x]

    def right_translation(self, x: int) -> tuple[int, ...]:
        """The permutation y -> y*x."""
        return self._columns[x]

    def opposite(self) -> LoopTable:
        """The mirror loop with product x∘y = y*x."""
        return LoopTable(self._columns, validate=False)

    def render(self) -> str:
        """Canonical text form: order on its own line, then the 1-based rows."""
        width = len(str(self.n))
        lines = [str(self.n)]
        for row in self.rows:
            lines.append(" ".join(str(v + 1).rjust(width) for v in row))
        return "\n".join(lines) + "\n"


def parse_loop_table(text: str) -> LoopTable:
    """Parse the canonical table format.

    '#' starts a comment anywhere on a line; the first remaining token is
    the order n, followed by n*n whitespace-separated 1-based entries in
    row-major order.
    """
    tokens: list[str] = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens:
        raise ParseError("BadDimension", "no tokens in input")
    try:
        n = int(tokens[0])
    except ValueError:
        raise ParseError("BadToken", f"order {tokens[0]!r} is not an integer") from None
    if n <= 0 or n > MAX_ORDER:
        raise ParseError("BadDimension", f"order must be in 1..{MAX_ORDER}, got {n}")
    body = tokens[1:]
    if len(body) != n * n:
        raise ParseError("BadDimension", f"expected {n * n} entries, got {len(body)}")
    entries = []
    for k, tok in enumerate(body):
        row, col = divmod(k, n)
        try:
            v = int(tok)
        except ValueError:
            raise ParseError("BadToken", f"entry {tok!r} at row {row + 1}, column {col + 1}",
                             row=row + 1, col=col + 1) from None
        if not 1 <= v <= n:
            raise ParseError("BadToken", f"entry {v} at row {row + 1}, column {col + 1} is not in 1..{n}",
                             row=row + 1, col=col + 1, value=v)
        entries.append(v - 1)
    rows = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
    _check_table(rows)
    return LoopTable(rows, validate=False)


def is_associative(L: LoopTable) -> bool:
    n, rows = L.n, L.rows
    for x in range(n):
        rx = rows[x]
        for y in range(n):
            xy = rx[y]
            ry = rows[y]
            rxy = rows[xy]
            for z in range(n):
                if rxy[z] != rx[ry[z]]:
                    return False
    return True


def is_commutative(L: LoopTable) -> bool:
    n, rows = L.n, L.rows
    return all(rows[x][y] == rows[y][x] for x in range(n) for y in range(x + 1, n))


# -- built-in fixtures -----------------------------------------------------

# A classic order-6 loop: noncommutative, nonassociative, yet with an
# abelian inner mapping group and central nilpotency class 2.
_EXAMPLE1_ROWS = (
    (0, 1, 2, 3, 4, 5),
    (1, 0, 3, 2, 5, 4),
    (2, 3, 4, 5, 0, 1),
    (3, 2, 5, 4, 1, 0),
    (4, 5, 1, 0, 2, 3),
    (5, 4, 0, 1, 3, 2),
)


def cyclic(n: int) -> LoopTable:
    return LoopTable(((i + j) % n for j in range(n)) for i in range(n))


def elementary2(k: int) -> LoopTable:
    n = 1 << k
    return LoopTable((i ^ j for j in range(n)) for i in range(n))


def dihedral(n: int) -> LoopTable:
    """Dihedral group of order 2n; index a*n+k encodes s^a r^k."""
    def prod(i, j):
        a1, k1 = divmod(i, n)
        a2, k2 = divmod(j, n)
        k = (k2 - k1 if a2 else k1 + k2) % n
        return (a1 ^ a2) * n + k
    return LoopTable((prod(i, j) for j in range(2 * n)) for i in range(2 * n))


def quaternion8() -> LoopTable:
    # index = 2*basis + sign with basis 0..3 for 1,i,j,k and sign 0 for +
    basis_prod = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (2, 0): (1, 2), (3, 0): (1, 3),
        (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
        (1, 2): (1, 3), (2, 1): (-1, 3),
        (2, 3): (1, 1), (3, 2): (-1, 1),
        (3, 1): (1, 2), (1, 3): (-1, 2),
    }
    def prod(i, j):
        bi, si = divmod(i, 2)
        bj, sj = divmod(j, 2)
        sign, basis = basis_prod[(bi, bj)]
        neg = (si + sj + (1 if sign < 0 else 0)) % 2
        return 2 * basis + neg
    return LoopTable((prod(i, j) for j in range(8)) for i in range(8))


_PARAM_FIXTURES = {
    "cyclic": (cyclic, lambda k: k >= 1),
    "dihedral": (dihedral, lambda k: k >= 1),
    "elementary2": (elementary2, lambda k: k >= 0),
}

_PLAIN_FIXTURES = {
    "example1": lambda: LoopTable(_EXAMPLE1_ROWS, validate=False),
    "klein4": lambda: elementary2(2),
    "quaternion8": quaternion8,
}

FIXTURE_NAMES = tuple(sorted(_PLAIN_FIXTURES) + sorted(_PARAM_FIXTURES))


def builtin_table(name: str, param: int | None = None) -> LoopTable:
    """Return a named fixture table; parametric names need ``param``."""
    if name in _PLAIN_FIXTURES:
        if param is not None:
            raise ValueError(f"fixture {name!r} takes no parameter")
        return _PLAIN_FIXTURES[name]()
    if name in _PARAM_FIXTURES:
        build, ok = _PARAM_FIXTURES[name]
        if param is None:
            raise ValueError(f"fixture {name!r} needs an integer parameter")
        if not ok(param):
            raise ValueError(f"parameter {param} out of range for fixture {name!r}")
        return build(param)
    raise ValueError(f"unknown fixture {name!r} (available: {', '.join(FIXTURE_NAMES)})")
