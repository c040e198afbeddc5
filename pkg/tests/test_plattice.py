import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from conftest import as_tuples
from fusionkit.catalog import cyclic, dihedral, elem_abelian, quaternion, semidihedral, symmetric
from fusionkit.permgrp import PermGroup, direct_product, sylow_subgroup
from fusionkit.plattice import (PGroup, aut_p_group, brute_force_subgroups, build_lattice,
                                direct_factorizations, upper_central_series)

P_GROUPS = {
    "C2": (cyclic(2), 2), "C4": (cyclic(4), 2), "V4": (elem_abelian(2, 2), 2),
    "D8": (dihedral(3), 2), "Q8": (quaternion(3), 2), "D16": (dihedral(4), 2),
    "SD16": (semidihedral(4), 2), "E9": (elem_abelian(3, 2), 3),
}


def _elements(G):
    return as_tuples(G.elements())


def test_subgroup_counts_examples():
    assert len(build_lattice(cyclic(2), 2)) == 2
    assert len(build_lattice(elem_abelian(2, 2), 2)) == 5
    L = build_lattice(dihedral(3), 2)
    assert len(L) == 10
    assert len(L.s_classes) == 8


@pytest.mark.parametrize("name", sorted(P_GROUPS))
def test_lattice_matches_oracle(name):
    G, p = P_GROUPS[name]
    L = build_lattice(G, p)
    elems = _elements(G)
    brute = O.subgroups(elems, G.degree)
    rows = L.S.rows
    mine = {frozenset(tuple(int(x) for x in rows[i]) for i in L.elements(k)) for k in range(len(L))}
    assert mine == brute
    # S-classes: orbit sizes and the class-size times normalizer identity
    for cl in L.s_classes:
        H = frozenset(tuple(int(x) for x in rows[i]) for i in L.elements(cl[0]))
        orbit = {O.conj_set(g, H) for g in elems}
        assert len(orbit) == len(cl)
        assert len(cl) * L.nodes[L.normalizer(cl[0])].order == L.S.n
    assert sum(len(c) for c in L.s_classes) == len(L)


@pytest.mark.parametrize("name", ["C4", "V4", "D8", "Q8"])
def test_table_subgroups_match_subset_oracle(name):
    G, p = P_GROUPS[name]
    S = PGroup(G, p)
    mine = {frozenset(tuple(int(x) for x in S.rows[i]) for i in np.flatnonzero(m))
            for m in brute_force_subgroups(S.table)}
    assert mine == O.subgroups_by_subsets(_elements(G), G.degree)


def test_automorphism_group_orders():
    assert aut_p_group(elem_abelian(2, 2)).order == 6
    assert aut_p_group(dihedral(3)).order == 8
    assert aut_p_group(quaternion(3)).order == 24


@pytest.mark.parametrize("name", ["V4", "D8", "Q8", "C4"])
def test_automorphism_order_matches_oracle(name):
    G, _ = P_GROUPS[name]
    assert aut_p_group(G).order == len(O.automorphisms(_elements(G), G.degree))


def test_direct_factorizations_examples():
    L = build_lattice(elem_abelian(2, 2), 2)
    twos = [d for d in direct_factorizations(L) if len(d) == 2]
    assert len(twos) == 3
    L = build_lattice(dihedral(3), 2)
    assert direct_factorizations(L) == [(L.top,)]
    D = dihedral(3)
    DD = direct_product(D, D)
    L2 = build_lattice(DD, 2)
    S = L2.S
    first = L2.id_of(S.table.closure([S.index_of(g) for g in DD.gens[:len(D.gens)]]))
    second = L2.id_of(S.table.closure([S.index_of(g) for g in DD.gens[len(D.gens):]]))
    assert tuple(sorted((first, second))) in direct_factorizations(L2)


@pytest.mark.parametrize("name", ["V4", "D8", "D16", "E9"])
def test_direct_factorizations_are_valid(name):
    G, p = P_GROUPS[name]
    L = build_lattice(G, p)
    T = L.S.table
    for dec in direct_factorizations(L):
        assert int(np.prod([L.nodes[d].order for d in dec])) == L.S.n
        for i, a in enumerate(dec):
            for b in dec[i + 1:]:
                ma, mb = L.nodes[a].mask, L.nodes[b].mask
                assert (ma & mb).sum() == 1
                ea, eb = np.flatnonzero(ma), np.flatnonzero(mb)
                assert (T.mul[np.ix_(ea, eb)] == T.mul[np.ix_(eb, ea)].T).all()


def test_upper_central_series_examples():
    assert [H.order for H in upper_central_series(elem_abelian(2, 2), 2)] == [4]
    assert [H.order for H in upper_central_series(dihedral(3), 2)] == [2, 8]
    series = upper_central_series(dihedral(4), 2)
    assert [H.order for H in series] == [2, 4, 16]
    assert all(g.order() <= 4 for g in series[1].element_list())
    assert max(g.order() for g in series[1].element_list()) == 4


@pytest.mark.parametrize("name", ["D8", "D16", "SD16", "Q8"])
def test_upper_central_series_matches_oracle(name):
    G, p = P_GROUPS[name]
    got = [_elements(H) for H in upper_central_series(G, p)]
    assert got == O.upper_central_series(_elements(G), G.degree)


# ---------------------------------------------------------------- properties

@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_p_subgroup_normalizer_lemma(seed):
    """For p-subgroups with P <= N(Q) and Q not inside P, (Q meet N(P)) is not inside P."""
    rng = random.Random(seed)
    G = symmetric(6)
    S = sylow_subgroup(G, 2)
    L = build_lattice(S, 2)
    T = L.S.table
    for _ in range(20):
        Q = rng.randrange(len(L))
        Ps = [P for P in range(len(L)) if L.is_sub(P, L.normalizer(Q)) and not L.is_sub(Q, P)]
        if not Ps:
            continue
        P = rng.choice(Ps)
        meet = L.nodes[Q].mask & T.normalizer(L.nodes[P].mask)
        assert not (meet & ~L.nodes[P].mask).sum() == 0


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(sorted(P_GROUPS)), st.integers(0, 10**6))
def test_automorphisms_preserve_orders(name, seed):
    G, _ = P_GROUPS[name]
    A = aut_p_group(G)
    rng = random.Random(seed)
    k = rng.randrange(A.order)
    for x in G.element_list():
        assert A.apply(k, x).order() == x.order()


def test_trivial_group_lattice():
    L = build_lattice(PermGroup(2, []), 2)
    assert len(L) == 1 and L.top == L.bottom
