import itertools

import pytest

from loopkit import builtin_table, loop_tables

EXAMPLE1_TEXT = """\
# order-6 loop, noncommutative and nonassociative
6
1 2 3 4 5 6
2 1 4 3 6 5
3 4 5 6 1 2
4 3 6 5 2 1
5 6 2 1 3 4
6 5 1 2 4 3
"""

GROUP_FIXTURES = [
    ("cyclic", 1), ("cyclic", 2), ("cyclic", 3), ("cyclic", 4), ("cyclic", 6),
    ("cyclic", 12), ("klein4", None), ("elementary2", 3),
    ("dihedral", 3), ("dihedral", 4), ("dihedral", 5), ("dihedral", 6),
    ("quaternion8", None),
]


@pytest.fixture(scope="session")
def example1():
    return builtin_table("example1")


@pytest.fixture(scope="session")
def group_tables():
    return [builtin_table(name, k) for name, k in GROUP_FIXTURES]


@pytest.fixture(scope="session")
def loops_upto5():
    """All 63 loops of orders 1..5."""
    out = []
    for n in range(1, 6):
        out.extend(loop_tables(n))
    return out


@pytest.fixture(scope="session")
def sample6():
    """A deterministic slice of the order-6 stream (every 97th table)."""
    return list(itertools.islice(loop_tables(6), 0, None, 97))
