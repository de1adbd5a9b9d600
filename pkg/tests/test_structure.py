import pytest

from loopkit.perms import cycle_notation, stabilizer
from loopkit.structure import (FactorLoop, IllDefined, NotNormal, SubsetMask,
                               all_subloops, center, commutant, factor_loop,
                               inn, is_normal, is_normal_full, is_subloop, mlt,
                               nilpotency_class, nuclei, structure_report,
                               subloop_generated, upper_central_series)
from loopkit.tables import builtin_table, is_associative, is_commutative


def mask(L, *labels):
    return SubsetMask.from_indices(L.n, [v - 1 for v in labels])


# -- masks -------------------------------------------------------------------

def test_subset_mask_basics():
    m = SubsetMask.from_indices(6, [0, 1])
    assert m.members() == (0, 1)
    assert m.labels() == (1, 2)
    assert m.render() == "{1,2}"
    assert 0 in m and 2 not in m
    assert len(m) == 2
    assert list(m) == [0, 1]
    full = SubsetMask.full(6)
    assert m.issubset(full) and not full.issubset(m)
    assert (m | full) == full and (m & full) == m
    assert full.is_full()


def test_subset_mask_errors():
    with pytest.raises(ValueError):
        SubsetMask.from_indices(4, [4])
    with pytest.raises(ValueError):
        SubsetMask.from_indices(4, [0]) & SubsetMask.from_indices(5, [0])


# -- Mlt / Inn ------------------------------------------------------------------

def test_mlt_orders(example1):
    assert mlt(example1).order == 24
    assert mlt(builtin_table("cyclic", 1)).order == 1
    # for an abelian group left and right translations coincide and the
    # closure is the group acting on itself
    assert mlt(builtin_table("cyclic", 5)).order == 5


def test_inn_example1_exact(example1):
    G = inn(example1)
    assert {cycle_notation(p) for p in G.elements} == \
        {"()", "(3,4)", "(5,6)", "(3,4)(5,6)"}


def test_inn_abelian_group_trivial(group_tables):
    for L in group_tables:
        if is_commutative(L):
            assert inn(L).order == 1


def test_inn_dihedral3():
    assert inn(builtin_table("dihedral", 3)).order == 6


def test_inn_equals_stabilizer(example1, loops_upto5, sample6, group_tables):
    for L in [example1] + loops_upto5 + group_tables + sample6[:40]:
        assert inn(L).element_set == stabilizer(mlt(L), 0).element_set


def test_inn_order_equality_for_groups(group_tables):
    # for a group the inner mapping group has the order of Q/Z(Q)
    for L in group_tables:
        assert inn(L).order == L.n // len(center(L))


# -- nuclei, commutant, center ----------------------------------------------------

def test_nuclei_example1(example1):
    nuc = nuclei(example1)
    expected = mask(example1, 1, 2)
    assert nuc.left == nuc.right == nuc.middle == nuc.nucleus == expected
    assert commutant(example1) == expected
    assert center(example1) == expected


def test_nuclei_of_groups(group_tables):
    for L in group_tables:
        nuc = nuclei(L)
        assert nuc.nucleus.is_full()
        assert nuc.left.is_full() and nuc.right.is_full() and nuc.middle.is_full()


def test_nucleus_contained_in_left(loops_upto5, sample6):
    for L in loops_upto5 + sample6[:50]:
        nuc = nuclei(L)
        assert nuc.nucleus.issubset(nuc.left)


def test_dihedral3_center_trivial():
    d3 = builtin_table("dihedral", 3)
    assert commutant(d3).members() == (0,)
    assert center(d3).members() == (0,)


def test_masks_are_subloops(example1, loops_upto5, sample6):
    for L in [example1] + loops_upto5 + sample6[:40]:
        nuc = nuclei(L)
        for m in (nuc.left, nuc.right, nuc.middle, nuc.nucleus, center(L)):
            assert is_subloop(L, m)


def test_center_always_normal(example1, loops_upto5, sample6, group_tables):
    for L in [example1] + loops_upto5 + group_tables + sample6[:40]:
        assert is_normal(L, center(L))


# -- subloops ----------------------------------------------------------------------

def test_subloop_generated(example1):
    assert subloop_generated(example1, [1]) == mask(example1, 1, 2)
    assert subloop_generated(example1, []) == mask(example1, 1)
    assert subloop_generated(example1, [2]).is_full()


def test_all_subloops_example1(example1):
    subs = all_subloops(example1)
    assert [s.labels() for s in subs] == [(1,), (1, 2), (1, 2, 3, 4, 5, 6)]


def test_all_subloops_trivial_and_cyclic4():
    assert len(all_subloops(builtin_table("cyclic", 1))) == 1
    assert len(all_subloops(builtin_table("cyclic", 4))) == 3


def test_all_subloops_cap():
    with pytest.raises(ValueError):
        all_subloops(builtin_table("cyclic", 17))


def test_subloops_closed(loops_upto5):
    for L in loops_upto5:
        for S in all_subloops(L):
            assert is_subloop(L, S)


# -- normality ------------------------------------------------------------------------

def test_is_normal_example1(example1):
    assert is_normal(example1, mask(example1, 1, 2))
    assert is_normal(example1, SubsetMask.full(6))


def test_reflection_subgroup_not_normal():
    d3 = builtin_table("dihedral", 3)
    refl = subloop_generated(d3, [3])
    assert len(refl) == 2
    assert not is_normal(d3, refl)


def test_is_normal_requires_subloop(example1):
    with pytest.raises(ValueError):
        is_normal(example1, mask(example1, 1, 3))


def test_generator_check_matches_full_inn(example1, loops_upto5, group_tables):
    for L in [example1] + loops_upto5 + group_tables[:8]:
        for S in all_subloops(L):
            assert is_normal(L, S) == is_normal_full(L, S)


# -- factor loops ----------------------------------------------------------------------

def test_factor_example1_is_cyclic3(example1):
    f = factor_loop(example1, mask(example1, 1, 2))
    assert f.quotient == builtin_table("cyclic", 3)
    assert f.representatives == (0, 2, 4)
    assert f.projection[0] == 0


def test_factor_trivial_cases(example1):
    whole = factor_loop(example1, SubsetMask.full(6))
    assert whole.quotient.n == 1
    by_one = factor_loop(example1, mask(example1, 1))
    assert by_one.quotient == example1
    assert by_one.projection == tuple(range(6))


def test_factor_projection_is_homomorphism(example1, loops_upto5):
    for L in [example1] + loops_upto5:
        for S in all_subloops(L):
            if not is_normal(L, S):
                continue
            f = factor_loop(L, S)
            q, proj = f.quotient, f.projection
            assert proj[0] == 0
            assert sorted(set(proj)) == list(range(q.n))
            for x in range(L.n):
                for y in range(L.n):
                    assert proj[L.mul(x, y)] == q.mul(proj[x], proj[y])


def test_factor_rejects_non_normal():
    d3 = builtin_table("dihedral", 3)
    refl = subloop_generated(d3, [3])
    with pytest.raises(NotNormal):
        factor_loop(d3, refl)


# -- central series ------------------------------------------------------------------------

def test_series_example1(example1):
    rep = upper_central_series(example1)
    assert [t.labels() for t in rep.terms] == \
        [(1,), (1, 2), (1, 2, 3, 4, 5, 6)]
    assert rep.nilpotency_class == 2
    assert rep.is_nilpotent


def test_series_various():
    assert nilpotency_class(builtin_table("cyclic", 1)) == 0
    assert nilpotency_class(builtin_table("cyclic", 7)) == 1
    assert nilpotency_class(builtin_table("klein4")) == 1
    assert nilpotency_class(builtin_table("quaternion8")) == 2
    assert nilpotency_class(builtin_table("dihedral", 4)) == 2
    assert nilpotency_class(builtin_table("dihedral", 3)) is None
    assert not upper_central_series(builtin_table("dihedral", 3)).is_nilpotent


def test_series_terms_increase(loops_upto5):
    for L in loops_upto5:
        rep = upper_central_series(L)
        assert rep.terms[0].members() == (0,)
        for a, b in zip(rep.terms, rep.terms[1:]):
            assert a.issubset(b) and len(a) < len(b)
        if rep.is_nilpotent:
            assert rep.terms[-1].is_full()


# -- report ------------------------------------------------------------------------------------

def test_structure_report(example1):
    r = structure_report(example1)
    assert r.mlt_order == 24 and r.inn_order == 4
    assert [cycle_notation(p) for p in r.inn_elements] == \
        ["()", "(3,4)", "(5,6)", "(3,4)(5,6)"]
    assert r.series.nilpotency_class == 2
    assert r.subloops is not None and len(r.subloops) == 3
