import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from conftest import T1_GENS, T2_GENS, a6_system, as_tuples, group, node_of, system
from fusionkit.catalog import from_selector, symmetric
from fusionkit.errors import CapacityError, InputError
from fusionkit.linking import (build_linking, essential_zero, is_quasicentric,
                               kernel_element_data, mu_kappa_report,
                               outer_exact_sequence_check)
from fusionkit.perm import Perm
from fusionkit.permgrp import PermGroup

CHEAP = [("sym:3", 3), ("sym:4", 2), ("alt:4", 2), ("alt:5", 2), ("dihedral:3", 2),
         ("psl2:7", 2), ("sym:5", 2)]


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _quasicentric_oracle(G, P, p):
    C = O.centralizer(as_tuples(G.elements()), as_tuples(P.elements()))
    return len(O.o_p_power(C, p, G.degree)) % p != 0


def test_quasicentric_examples(a6):
    G = a6.G
    assert not is_quasicentric(G, PermGroup(6, []), 2)
    Z = group(["(1 2)(3 4)"], 6)
    assert is_quasicentric(G, Z, 2)
    assert is_quasicentric(G, group(T1_GENS, 6), 2)


@pytest.mark.parametrize("gens", [[], ["(1 2)(3 4)"], ["(1 2)(3 4)", "(1 3)(2 4)"],
                                  ["(1 2)(3 4)", "(3 4)(5 6)"], ["(3 4)(5 6)"]])
def test_quasicentric_matches_oracle(a6, gens):
    P = group(gens, 6)
    assert is_quasicentric(a6.G, P, 2) == _quasicentric_oracle(a6.G, P, 2)


def test_a6_linking_system(a6):
    Lk = build_linking(a6)
    assert Lk.check() == []
    assert Lk.objects[node_of(a6, T1_GENS)].aut_order == 24
    assert Lk.objects[node_of(a6, T2_GENS)].aut_order == 24
    assert Lk.objects[a6.L.top].aut_order == 8


def test_sigma4_linking_matches_oracle():
    F = system("sym:4", 2)
    Lk = build_linking(F)
    G = as_tuples(F.G.elements())
    for P, ob in Lk.objects.items():
        H = as_tuples(F.L.perm_group(P).elements())
        C = O.centralizer(G, H)
        assert ob.aut_order * len(O.o_p_power(C, 2, 4)) == len(O.normalizer(G, H))


@pytest.mark.parametrize("sel,p", CHEAP)
def test_linking_axioms(sel, p):
    assert build_linking(system(sel, p)).check() == []


def test_quasicentric_family_above_center(a6):
    z = node_of(a6, ["(1 2)(3 4)"])
    Lk = build_linking(a6, objects="quasicentric-above", above=z)
    assert z in Lk.objects
    assert Lk.check() == []


def test_linking_rejects_bad_requests(a6):
    with pytest.raises(InputError):
        build_linking(a6, objects="everything")
    with pytest.raises(InputError):
        build_linking(a6, objects="quasicentric-above")


def test_a6_report(a6):
    r = mu_kappa_report(a6.G, 2, F=a6)
    assert (r.out_G, r.aut_G_S) == (4, 32)
    assert r.restriction_kernel == 2
    assert (r.ker_mu_lower, r.ker_mu_upper) == (2, 2)
    assert r.ker_kappa == 1
    assert r.kappa == "isomorphism"
    assert r.exact_sequence


def test_a6_kernel_class_data(a6):
    r = mu_kappa_report(a6.G, 2, F=a6)
    t1, t2 = node_of(a6, T1_GENS), node_of(a6, T2_GENS)
    assert sorted(essential_zero(a6)) == sorted([t1, t2])
    nontrivial = [k for k in r.kernel_classes if not k.trivial]
    assert len(nontrivial) == 1
    assert nontrivial[0].g_data == {t1: "()", t2: "(1 2)(3 4)"}


def test_transposition_56_kernel_data(a6):
    # (5 6) centralizes S, so conjugation by it is already normalized
    c = Perm.parse("(5 6)", 6)
    gd = kernel_element_data(a6, lambda x: c * Perm(x) * c)
    t1, t2 = node_of(a6, T1_GENS), node_of(a6, T2_GENS)
    assert str(a6.S.perms[gd[t1]]) == "()"
    assert str(a6.S.perms[gd[t2]]) == "(1 2)(3 4)"


def test_sigma4_report():
    r = mu_kappa_report(symmetric(4), 2, F=system("sym:4", 2))
    assert r.out_G == 1
    assert r.ker_mu_upper == 1
    assert r.kappa == "isomorphism"
    assert r.aut_G_S == 8


def test_psl27_report_is_ambiguous():
    r = mu_kappa_report(from_selector("psl2:7").group, 2, F=system("psl2:7", 2))
    assert (r.ker_mu_lower, r.ker_mu_upper) == (1, 2)
    assert r.kappa == "ambiguous"


@pytest.mark.parametrize("sel,p", CHEAP + [("alt:6", 2)])
def test_outer_exact_sequence(sel, p):
    assert outer_exact_sequence_check(from_selector(sel).group, p)


def test_capacity_error_for_large_groups():
    with pytest.raises(CapacityError):
        mu_kappa_report(from_selector("alt:8").group, 2, F=system("alt:8", 2))


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(CHEAP))
def test_kernel_bounds_are_p_powers(case):
    sel, p = case
    F = system(sel, p)
    r = mu_kappa_report(F.G, p, F=F)
    assert _is_p_power(r.ker_mu_lower, p)
    assert _is_p_power(r.ker_mu_upper, p)
    assert r.ker_mu_lower <= r.ker_mu_upper
    assert r.restriction_kernel == r.ker_mu_lower * r.ker_kappa


def test_a6_bounds_are_p_powers():
    r = mu_kappa_report(a6_system().G, 2, F=a6_system())
    assert _is_p_power(r.ker_mu_lower, 2) and _is_p_power(r.ker_mu_upper, 2)
