from __future__ import annotations

import json

import numpy as np
import pytest

from conftest import eta, heis_H, named
from ekr.action import build_coset_action, is_intersecting
from ekr.ekrgraph import (EKRReport, build_graph, check_strong_ekr, check_weak_ekr,
                          clique_coclique_check, enumerate_maximum_cliques_through_identity,
                          is_clique, max_clique, naive_adjacency, naive_max_clique,
                          verify_independent)
from ekr.catalog import load_group
from ekr.groupcore import (CapExceeded, PermRep, center, conjugate_closure, conjugates,
                           enumerate_group, is_coset_of_conjugate, subgroup_classes,
                           subgroup_generate)
from ekr.witnesses import pgl_independent_set, point_stabilizer


def sl2_J(q):
    G = named("SL", n=2, q=q)
    return G, subgroup_generate(G, [G.index_of([0, G.rep.F.neg(1), 1, 0])])


def quotient(G, N):
    """G/N as the permutation group it induces on the cosets of N."""
    a = build_coset_action(G, N)
    Q = enumerate_group(PermRep(a.degree), [a.table[g].tolist() for g in G.generators])
    image = Q.index_many(a.table.astype(np.int64))
    return Q, image


def move_point_labels(img, sigma):
    sigma = np.asarray(sigma)
    out = np.empty_like(img)
    out[sigma] = sigma[img]
    return out


def relabel_points(G, H, sigma):
    """The same permutation group with its points renamed by ``sigma``, so
    every element lands at a different canonical index."""
    G2 = enumerate_group(PermRep(len(sigma)),
                         [move_point_labels(G.elements[g], sigma).tolist() for g in G.generators])
    H2 = subgroup_generate(G2, [G2.index_of(move_point_labels(G.elements[h], sigma))
                                for h in H.generators()])
    return G2, H2


# -- build_graph ---------------------------------------------------------------

def test_graph_examples(g3):
    G = named("symmetric", n=4)
    assert build_graph(build_coset_action(G, G.whole())).is_complete
    V4 = subgroup_generate(G, [G.index_of(np.array([1, 0, 3, 2])), G.index_of(np.array([2, 3, 0, 1]))])
    g = build_graph(build_coset_action(G, V4))
    assert g.degree == 3
    A = g.induced(range(G.order))
    for x in range(G.order):
        component = set(np.flatnonzero(A[x]).tolist()) | {x}
        assert component == set(G.mul_many(x, V4.members).tolist())
    G3, H = g3
    g = build_graph(build_coset_action(G3, H))
    assert g.order == 27 and g.degree == 6
    assert g.induced(range(27)).sum(axis=1).tolist() == [6] * 27


@pytest.mark.parametrize("name,params", [("symmetric", {"n": 4}), ("GL", {"n": 2, "q": 3}),
                                         ("alternating", {"n": 5})])
def test_connection_set_closure(name, params):
    G = named(name, **params)
    for H in subgroup_classes(G):
        c = build_graph(build_coset_action(G, H)).connection
        assert not c[G.identity]
        idx = np.flatnonzero(c)
        assert c[G.inverses[idx]].all()
        assert c[G.conj_many(idx[None, :], G.all()[:, None])].all()


def test_vertex_transitivity(rng):
    for G, H in [heis_H(5), sl2_J(5)]:
        graph = build_graph(build_coset_action(G, H))
        g, a, b = rng.integers(0, G.order, size=(3, 1000))
        for x, y, z in zip(g, a, b):
            assert graph.adjacent(y, z) == graph.adjacent(G.mul(x, y), G.mul(x, z))


def test_naive_adjacency_matches_graph():
    G, H = sl2_J(3)
    a = build_coset_action(G, H)
    assert np.array_equal(naive_adjacency(a), build_graph(a).induced(range(G.order)))


# -- max_clique ----------------------------------------------------------------

def test_max_clique_examples(g3):
    G = named("symmetric", n=4)
    assert max_clique(build_graph(build_coset_action(G, G.whole())))[0] == 24
    size, witness = max_clique(build_graph(build_coset_action(*g3)))
    assert size == 3 and g3[0].identity in witness
    G, H = sl2_J(3)
    size, witness = max_clique(build_graph(build_coset_action(G, H)))
    assert size >= 5 and size > H.order


def test_max_clique_witness_is_a_clique():
    for G, H in [heis_H(5), sl2_J(5), sl2_J(4)]:
        a = build_coset_action(G, H)
        graph = build_graph(a)
        size, witness = max_clique(graph)
        assert len(witness) == size and is_clique(graph, witness) and is_intersecting(a, witness)


def test_upper_hint_stops_early():
    G, H = heis_H(5)
    graph = build_graph(build_coset_action(G, H))
    assert max_clique(graph, upper_hint=5)[0] == 5


def test_max_clique_cap():
    G, H = heis_H(3)
    with pytest.raises(CapExceeded):
        max_clique(build_graph(build_coset_action(G, H)), max_vertices=10)


ORACLE_CASES = [("symmetric", {"n": 4}), ("GL", {"n": 2, "q": 3}), ("dihedral", {"n": 6}),
                ("quaternion8", {}), ("heisenberg", {"p": 3}), ("SL", {"n": 2, "q": 3})]


@pytest.mark.parametrize("name,params", ORACLE_CASES)
def test_oracle_equivalence(name, params):
    G = named(name, **params)
    for H in subgroup_classes(G):
        a = build_coset_action(G, H)
        assert max_clique(build_graph(a))[0] == naive_max_clique(a)


# -- enumeration and deciders ----------------------------------------------------

def test_enumerate_examples(g3):
    G = named("symmetric", n=4)
    A4 = subgroup_generate(G, [G.index_of(np.array([1, 2, 0, 3])), G.index_of(np.array([1, 0, 3, 2]))])
    graph = build_graph(build_coset_action(G, A4))
    assert enumerate_maximum_cliques_through_identity(graph) == [tuple(A4.members.tolist())]
    G3, H = g3
    cl = enumerate_maximum_cliques_through_identity(build_graph(build_coset_action(G3, H)))
    parabola = tuple(sorted(eta(G3, 3, x, 0, x * x) for x in range(3)))
    assert parabola in cl
    assert set(conjugates(G3, H)) <= set(cl)
    assert cl == sorted(cl)


def test_enumerate_gl2_unipotent():
    G = named("GL", n=2, q=3)
    U = subgroup_generate(G, [G.index_of([1, 1, 0, 1])])
    cl = enumerate_maximum_cliques_through_identity(build_graph(build_coset_action(G, U)))
    assert set(cl) == set(conjugates(G, U))


def test_decider_examples(g3):
    G = named("quaternion8")
    for H in subgroup_classes(G):
        r = check_strong_ekr(build_coset_action(G, H))
        assert r.weak and r.strong == "true"
    G3, H = g3
    a = build_coset_action(G3, H)
    r = check_strong_ekr(a)
    assert r.weak and r.strong == "false" and r.max_clique_size == 3
    assert r.witness_kind == "non_canonical_max_clique"
    assert is_intersecting(a, r.witness) and not is_coset_of_conjugate(G3, r.witness, H)
    G, H = sl2_J(3)
    a = build_coset_action(G, H)
    r = check_weak_ekr(a)
    assert not r.weak and r.strong == "false" and len(r.witness) >= 5
    assert r.witness_kind == "clique" and is_intersecting(a, r.witness)
    assert check_weak_ekr(build_coset_action(*heis_H(3))).strong == "not_computed"


def test_report_json_shape(g3):
    r = check_strong_ekr(build_coset_action(*g3))
    d = json.loads(r.to_json())
    assert list(d) == ["group_order", "index", "stabilizer_size", "max_clique", "weak", "strong",
                       "witness", "extremal_count"]
    assert d["group_order"] == 27 and d["index"] == 9 and d["stabilizer_size"] == 3
    assert d["witness"]["kind"] == "non_canonical_max_clique"
    assert d["extremal_count"] == len(r.extremal_cliques_mod_translation)
    empty = EKRReport(6, 3, 2, 2, True, "not_computed")
    assert empty.to_dict()["witness"] is None and empty.extremal_count is None


def test_weak_iff_clique_equals_stabilizer():
    G = named("GL", n=2, q=3)
    for H in subgroup_classes(G):
        r = check_strong_ekr(build_coset_action(G, H))
        assert r.max_clique_size >= H.order
        assert r.weak == (r.max_clique_size == H.order)
        if r.extremal_cliques_mod_translation:
            a = build_coset_action(G, H)
            assert all(is_intersecting(a, c) for c in r.extremal_cliques_mod_translation)


def test_strong_not_computed_on_enumeration_cap(g3):
    r = check_strong_ekr(build_coset_action(*g3), max_extremal=2)
    assert r.weak and r.strong == "not_computed" and "diagnostic" in r.to_dict()


def test_threads_do_not_change_reports():
    for G, H in [heis_H(5), sl2_J(5), sl2_J(3)]:
        a = build_coset_action(G, H)
        one = check_strong_ekr(a, threads=1).to_json()
        assert check_strong_ekr(a, threads=4).to_json() == one


def test_verdict_invariant_under_point_relabeling():
    G = named("symmetric", n=4)
    sigma = [2, 0, 3, 1]
    for H in subgroup_classes(G):
        G2, H2 = relabel_points(G, H, sigma)
        moved = np.array([G2.index_of(move_point_labels(G.elements[g], sigma)) for g in range(24)])
        assert not np.array_equal(moved, np.arange(24))
        r1 = check_strong_ekr(build_coset_action(G, H))
        r2 = check_strong_ekr(build_coset_action(G2, H2))
        assert (r1.weak, r1.strong, r1.max_clique_size, r1.extremal_count) == \
               (r2.weak, r2.strong, r2.max_clique_size, r2.extremal_count)


def test_verdict_invariant_under_conjugating_stabilizer(rng):
    G = named("GL", n=2, q=3)
    for H in subgroup_classes(G):
        g = int(rng.integers(G.order))
        Hg = subgroup_generate(G, G.conj_many(H.members, g))
        r1, r2 = check_strong_ekr(build_coset_action(G, H)), check_strong_ekr(build_coset_action(G, Hg))
        assert (r1.weak, r1.strong, r1.max_clique_size) == (r2.weak, r2.strong, r2.max_clique_size)


# -- clique/coclique -----------------------------------------------------------

def test_clique_coclique_examples():
    G = named("symmetric", n=4)
    graph = build_graph(build_coset_action(G, G.trivial()))
    assert clique_coclique_check(graph, [G.identity], [G.identity])
    cert = pgl_independent_set(2, 3)
    P = load_group(cert.group_spec)
    H = point_stabilizer(P)
    T = [P.index_of(P.rep.validate(e)) for e in cert.elements]
    graph = build_graph(build_coset_action(P, H))
    assert H.order == 6 and len(T) == 4
    assert clique_coclique_check(graph, H.members, T)
    assert len(T) * H.order == P.order
    # one vertex per component of a disjoint union of cliques
    N = center(named("GL", n=2, q=3))
    G = N.parent
    graph = build_graph(build_coset_action(G, N))
    a = build_coset_action(G, N)
    assert clique_coclique_check(graph, N.members, a.points)
    assert len(a.points) * N.order == G.order


def test_clique_coclique_rejects_bad_inputs(g3):
    graph = build_graph(build_coset_action(*g3))
    G, H = g3
    h = int(H.members[1])
    with pytest.raises(ValueError):
        clique_coclique_check(graph, [G.identity, eta(G, 3, 0, 0, 1)], [G.identity])
    with pytest.raises(ValueError):
        clique_coclique_check(graph, [G.identity], [G.identity, h])


def test_verify_independent_examples(g3, rng):
    G, H = g3
    graph = build_graph(build_coset_action(G, H))
    assert verify_independent(graph, [4])
    D = conjugate_closure(G, H)
    for g in rng.integers(0, G.order, size=20):
        for d in D[1:]:
            assert not verify_independent(graph, [int(g), G.mul(int(g), int(d))])


# -- quotients and the two-subgroup criterion ------------------------------------

def test_quotient_by_kernel_scales_clique():
    cases = []
    G3, _ = heis_H(3)
    Z = center(G3)
    for H in subgroup_classes(G3):
        if Z.mask[H.members].sum() == Z.order:
            cases.append((G3, H, Z))
    for q in (3, 5):
        G, H = sl2_J(q)
        cases.append((G, H, center(G)))
    for G, H, N in cases:
        assert N.mask[H.members].sum() == N.order
        Q, image = quotient(G, N)
        Hq = subgroup_generate(Q, np.unique(image[H.members]))
        big = max_clique(build_graph(build_coset_action(G, H)))[0]
        small = max_clique(build_graph(build_coset_action(Q, Hq)))[0]
        assert big == small * N.order
        assert Hq.order * N.order == H.order


def test_quotient_matches_catalog_psl():
    G, H = sl2_J(5)
    Q, image = quotient(G, center(G))
    assert Q.order == named("PSL", n=2, q=5).order


@pytest.mark.parametrize("name,params", [("symmetric", {"n": 4}), ("SL", {"n": 2, "q": 3}),
                                         ("GL", {"n": 2, "q": 3}), ("alternating", {"n": 5}),
                                         ("dihedral", {"n": 6})])
def test_larger_subgroup_inside_conjugates_breaks_weak(name, params):
    G = named(name, **params)
    classes = subgroup_classes(G)
    hits = 0
    for U in classes:
        D = np.zeros(G.order, bool)
        D[conjugate_closure(G, U)] = True
        for V in classes:
            if V.order > U.order and D[V.members].all():
                hits += 1
                assert not check_weak_ekr(build_coset_action(G, U)).weak
                break
    if name in ("SL", "alternating"):
        assert hits > 0
