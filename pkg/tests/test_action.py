from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import eta, heis_H, named
from ekr.action import (CosetAction, build_coset_action, has_fixed_point, is_intersecting,
                        stabilizer)
from ekr.groupcore import (CapExceeded, GroupError, conjugate_closure, subgroup_classes,
                           subgroup_generate)

CASES = [("symmetric", {"n": 4}), ("GL", {"n": 2, "q": 3}), ("heisenberg", {"p": 3}),
         ("alternating", {"n": 5}), ("dihedral", {"n": 6}), ("quaternion8", {})]


def actions(name, params, limit=8):
    G = named(name, **params)
    return [build_coset_action(G, H) for H in subgroup_classes(G)[:limit]]


def test_examples(g3, s3):
    G = named("symmetric", n=4)
    a = build_coset_action(G, G.whole())
    assert a.degree == 1 and (a.table == 0).all()
    G3, H = g3
    assert build_coset_action(G3, H).degree == 9
    GL = named("GL", n=2, q=3)
    U = subgroup_generate(GL, [GL.index_of([1, 1, 0, 1])])
    assert build_coset_action(GL, U).degree == 16


def test_fixed_point_examples(g3, s3):
    G, H = g3
    a = build_coset_action(G, H)
    assert has_fixed_point(a, G.identity)
    assert not has_fixed_point(a, eta(G, 3, 0, 0, 1))
    t = s3.index_of(np.array([1, 0, 2]))
    a3 = build_coset_action(s3, subgroup_generate(s3, [t]))
    assert not has_fixed_point(a3, s3.index_of(np.array([1, 2, 0])))


def test_intersecting_examples(g3, s3, rng):
    G, H = g3
    a = build_coset_action(G, H)
    assert is_intersecting(a, [])
    assert is_intersecting(a, [5])
    coset = G.mul_many(eta(G, 3, 0, 2, 1), H.members)
    assert is_intersecting(a, coset[:2]) and is_intersecting(a, coset)
    assert is_intersecting(a, [eta(G, 3, x, 0, x * x) for x in range(3)])
    t = s3.index_of(np.array([1, 0, 2]))
    a3 = build_coset_action(s3, subgroup_generate(s3, [t]))
    assert not is_intersecting(a3, [s3.identity, s3.index_of(np.array([1, 2, 0]))])


@pytest.mark.parametrize("name,params", CASES)
def test_action_axioms(name, params):
    for a in actions(name, params):
        G, T = a.group, a.table
        assert (T[G.identity] == np.arange(a.degree)).all()
        for g in range(0, G.order, max(1, G.order // 25)):
            gh = G.mul_many(g, G.all())
            assert np.array_equal(T[gh], T[g][T])
        assert set(T[:, 0].tolist()) == set(range(a.degree))
        assert a.degree * a.subgroup.order == G.order


@pytest.mark.parametrize("name,params", CASES)
def test_fixed_point_iff_in_conjugate_union(name, params):
    for a in actions(name, params):
        has_fp = (a.table == np.arange(a.degree)[None, :]).any(axis=1)
        D = np.zeros(a.group.order, bool)
        D[conjugate_closure(a.group, a.subgroup)] = True
        assert np.array_equal(has_fp, D)
        assert all(has_fixed_point(a, g) == D[g] for g in range(0, a.group.order, 7))


@pytest.mark.parametrize("name,params", CASES)
def test_stabilizers(name, params):
    for a in actions(name, params):
        H = a.subgroup
        assert stabilizer(a, 0) == H
        for x in range(a.degree):
            St = stabilizer(a, x)
            assert St.order == H.order
            assert np.array_equal(St.members, np.flatnonzero(a.table[:, x] == x))
            if H.is_normal():
                assert St == H


@given(st.integers(0, 26), st.lists(st.integers(0, 26), max_size=5))
def test_translates_of_intersecting_sets_intersect(shift, extra):
    G, H = heis_H(3)
    a = build_coset_action(G, H)
    S = [eta(G, 3, x, 0, x * x) for x in range(3)]
    assert is_intersecting(a, G.mul_many(shift, np.array(S)))
    T = sorted(set(extra))
    assert is_intersecting(a, T) == is_intersecting(a, G.mul_many(shift, np.array(T, dtype=np.int64)))


def test_is_intersecting_matches_table(rng):
    G = named("GL", n=2, q=3)
    for H in subgroup_classes(G)[1:6]:
        a = build_coset_action(G, H)
        for _ in range(30):
            S = rng.choice(G.order, size=rng.integers(2, 5), replace=False)
            want = all((a.table[s] == a.table[t]).any() for s in S for t in S)
            assert is_intersecting(a, S) == want


def test_large_group_table_without_dense_mul():
    G = named("PSL", n=3, q=3)
    H = subgroup_generate(G, G.generators[:1])
    a = build_coset_action(G, H)
    x = 3
    g = 1000
    assert a.table[g, x] == a.act(g, x)


def test_caps_and_errors():
    G = named("symmetric", n=4)
    with pytest.raises(CapExceeded):
        CosetAction(G, G.trivial(), max_points=10)
    with pytest.raises(CapExceeded):
        CosetAction(G, G.trivial(), table_cap=100).table
    with pytest.raises(GroupError):
        CosetAction(named("symmetric", n=3), G.trivial())
