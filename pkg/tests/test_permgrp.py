import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from conftest import T1_GENS, T2_GENS, as_tuples, group
from fusionkit.catalog import alternating, symmetric
from fusionkit.errors import InputError
from fusionkit.perm import Perm
from fusionkit.permgrp import (PermGroup, automorphism_group, center, centralizer,
                               format_group_text, normalizer, op_core, op_power_residual,
                               opprime_core, opprime_residual, parse_group_text,
                               quotient_group, sylow_subgroup, transporter)

A6 = alternating(6)
S4 = symmetric(4)
S3 = symmetric(3)


def test_orders_of_small_groups():
    assert group(["(1 2 3)"], 3).order == 3
    assert group(["(1 2 3 4 5)", "(4 5 6)"], 6).order == 360
    assert PermGroup(1, []).order == 1


def test_a6_order_matches_closure_oracle():
    assert len(O.closure([tuple(g) for g in A6.gens], 6)) == A6.order == 360


def test_sylow_orders():
    S = sylow_subgroup(A6, 2)
    assert S.order == 8 and S.is_subgroup_of(A6)
    # dihedral: one central involution, an element of order 4
    orders = sorted(g.order() for g in S.element_list())
    assert orders == [1, 2, 2, 2, 2, 2, 4, 4]
    assert sylow_subgroup(group(["(1 2 3)"], 3), 2).order == 1
    assert sylow_subgroup(S4, 2).order == 8


def test_transporter_examples():
    T1, T2 = group(T1_GENS, 6), group(T2_GENS, 6)
    assert len(transporter(A6, T1, T2)) == 0
    assert len(transporter(A6, T1, T1)) == 24
    assert len(transporter(S3, S3, S3)) == 6
    G = as_tuples(A6.elements())
    brute = O.transporter(G, as_tuples(T1.elements()), as_tuples(T1.elements()))
    assert as_tuples(transporter(A6, T1, T1).elements()) == brute


def test_centralizer_normalizer_center():
    T1 = group(T1_GENS, 6)
    assert centralizer(A6, T1) == T1
    assert normalizer(A6, A6) == A6
    V = group(["(1 2)", "(3 4)"], 4)
    assert center(V) == V
    assert center(A6).order == 1


def test_op_power_residual_examples():
    assert op_power_residual(S4, 2) == alternating(4)
    assert op_power_residual(A6, 2) == A6
    assert op_power_residual(S3, 3) == S3


def test_cores_and_residuals():
    assert op_core(S4, 2) == group(["(1 2)(3 4)", "(1 3)(2 4)"], 4)
    assert opprime_core(A6, 2).order == 1
    assert opprime_residual(S3, 3) == group(["(1 2 3)"], 3)


def test_quotients():
    q = quotient_group(S4, op_core(S4, 2))
    assert q.group.order == 6
    assert quotient_group(A6, A6).group.order == 1
    from fusionkit.catalog import dihedral
    D8 = dihedral(3)
    qd = quotient_group(D8, center(D8))
    assert qd.group.order == 4
    assert all(g.order() <= 2 for g in qd.group.element_list())


def test_out_orders():
    assert automorphism_group(A6).out_order == 4
    assert automorphism_group(S4).out_order == 1
    assert automorphism_group(PermGroup(1, [])).out_order == 1


def test_out_s4_matches_oracle():
    G = as_tuples(S4.elements())
    assert len(O.automorphisms(G, 4)) == automorphism_group(S4).order == 24


def test_group_text_round_trip():
    text = "degree: 6\np: 2\ngenerators:\n(1 2 3 4 5)\n(4 5 6)\n"
    G, p = parse_group_text(text)
    assert (G.order, p) == (360, 2)
    G2, p2 = parse_group_text(format_group_text(G, p))
    assert G2 == G and p2 == 2


def test_group_text_rejects_garbage():
    with pytest.raises(InputError):
        parse_group_text("degree: x\n")
    with pytest.raises(InputError):
        parse_group_text("degree: 3\ngenerators:\n(1 5)\n")


# ---------------------------------------------------------------- properties

def _random_group(seed, degree=6, k=2):
    rng = random.Random(seed)
    gens = []
    for _ in range(k):
        img = list(range(degree))
        rng.shuffle(img)
        gens.append(Perm(img))
    return PermGroup(degree, gens)


seeds = st.integers(min_value=0, max_value=10**6)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_order_matches_closure(seed):
    G = _random_group(seed, 5)
    assert G.order == len(O.closure([tuple(g) for g in G.gens], 5))


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([2, 3]))
def test_lagrange_and_sylow(seed, p):
    G = _random_group(seed, 5)
    S = sylow_subgroup(G, p)
    assert G.order % S.order == 0
    assert S.order == O.p_part(G.order, p)
    H = PermGroup(5, G.gens[:1])
    assert G.order % H.order == 0


@settings(max_examples=20, deadline=None)
@given(seeds, st.sampled_from([2, 3]))
def test_op_power_residual_matches_oracle(seed, p):
    G = _random_group(seed, 5)
    R = op_power_residual(G, p)
    elems = as_tuples(G.elements())
    assert as_tuples(R.elements()) == O.o_p_power(elems, p, 5)
    assert O.p_part(G.order // R.order, p) == G.order // R.order


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_transporter_conjugates_into_target(seed):
    G = _random_group(seed, 5)
    rng = random.Random(seed)
    P = PermGroup(5, [G.random_element(rng)])
    Q = PermGroup(5, [G.random_element(rng), G.random_element(rng)])
    tr = transporter(G, P, Q)
    for g in tr.representatives:
        assert all(Q.contains(g * x * g.inverse()) for x in P.gens)
    brute = O.transporter(as_tuples(G.elements()), as_tuples(P.elements()), as_tuples(Q.elements()))
    assert len(tr) == len(brute)


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_quotient_projection_is_homomorphism(seed):
    G = _random_group(seed, 5)
    N = op_power_residual(G, 2)
    q = quotient_group(G, N)
    rng = random.Random(seed)
    for _ in range(10):
        a, b = G.random_element(rng), G.random_element(rng)
        assert q.project(a * b) == q.project(a) * q.project(b)
    assert all(q.project(x).is_identity() for x in N.gens)
    assert q.group.order * N.order == G.order


@settings(max_examples=8, deadline=None)
@given(seeds)
def test_automorphism_group_closed(seed):
    G = _random_group(seed, 4)
    A = automorphism_group(G)
    assert A.order % A.inn_order == 0
    assert A.inn_order * center(G).order == G.order
    rng = random.Random(seed)
    elems = G.element_list()
    for _ in range(5):
        i, j = rng.randrange(A.order), rng.randrange(A.order)
        comp = {x: A.apply(i, A.apply(j, x)) for x in elems}
        assert any(all(A.apply(k, x) == comp[x] for x in elems) for k in range(A.order))
