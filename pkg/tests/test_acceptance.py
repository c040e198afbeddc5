"""End-to-end acceptance checks, one test per criterion, each printing a PASS/FAIL line."""

import random

import numpy as np

from conftest import T1_GENS, T2_GENS, a6_system, node_of, system
from fusionkit.catalog import STANDARD, cyclic, dihedral, from_selector, semidihedral
from fusionkit.fusion import (alperin_decompose, centrad_check, check_saturation, compose_steps,
                              focal, hyperfocal, inner_system, is_normal, is_normal_by_definition,
                              is_strongly_closed, op_core_F, system_from_assignments)
from fusionkit.fusionops import (embed_by_perms, equal_under, fully_normalized_correspondence,
                                 fusion_preserving_auts, is_isomorphic, product_node,
                                 product_system, quotient_system, same_system)
from fusionkit.linking import mu_kappa_report
from fusionkit.perm import Perm
from fusionkit.permgrp import derived_subgroup, op_power_residual
from fusionkit.plattice import build_lattice
from fusionkit.reduction import (factorize, is_constrained, is_reduced, opprime_subsystem,
                                 oppower_subsystem, reduce)
from fusionkit.search import essential_candidates, search_reduced

P_GROUPS = [("dihedral:3", 2), ("dihedral:4", 2), ("quaternion:3", 2), ("semidihedral:4", 2),
            ("elemab:2:2", 2), ("elemab:3:2", 3), ("cyclic:4", 2)]


def verdict(n, checks):
    failed = [name for name, ok in checks if not ok]
    print(f"{'PASS' if not failed else 'FAIL'} criterion {n}" + (f": {failed}" if failed else ""))
    assert not failed


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


# ---------------------------------------------------------------- 1

def test_criterion_1_a6_worked_example():
    F = a6_system()
    t1, t2 = node_of(F, T1_GENS), node_of(F, T2_GENS)
    ess = {F.class_of(P) for P in F.essential_subgroups()}
    r = mu_kappa_report(F.G, 2, F=F)
    moved = [k for k in r.kernel_classes if not k.trivial]
    verdict(1, [
        ("essential classes", ess == {F.class_of(t1), F.class_of(t2)}),
        ("g data", len(moved) == 1 and moved[0].g_data == {t1: "()", t2: "(1 2)(3 4)"}),
        ("ker mu", (r.ker_mu_lower, r.ker_mu_upper) == (2, 2)),
        ("kappa", r.kappa == "isomorphism"),
        ("Out(A6)", r.out_G == 4),
    ])


# ---------------------------------------------------------------- 2

def test_criterion_2_dihedral_uniqueness():
    L = build_lattice(dihedral(3), 2)
    cands = essential_candidates(L)
    F = system_from_assignments(L, {c.node: c.choices[c.orders.index(6)] for c in cands})
    res = search_reduced(L)
    verdict(2, [
        ("two Klein four candidates", sorted(L.nodes[c.node].order for c in cands) == [4, 4]),
        ("saturated", check_saturation(F).saturated),
        ("reduced", is_reduced(F).reduced),
        ("iso PSL2(7)", is_isomorphic(F, system("psl2:7", 2)) is not None),
        ("iso A6", is_isomorphic(F, system("alt:6", 2)) is not None),
        ("search count", res.n_reduced == 1),
    ])


# ---------------------------------------------------------------- 3

def _is_quaternion(L, node):
    return sorted(Perm(map(int, L.S.rows[i])).order() for i in L.elements(node)) == \
        [1, 2, 4, 4, 4, 4, 4, 4]


def test_criterion_3_semidihedral():
    FM = system("m11", 2)
    L = build_lattice(semidihedral(4), 2)
    cands = essential_candidates(L)
    res = search_reduced(L)
    kinds = sorted((L.nodes[c.node].order, _is_quaternion(L, c.node)) for c in cands)
    verdict(3, [
        ("M11 reduced", is_reduced(FM).reduced),
        ("candidates Klein four and Q8", kinds == [(4, False), (8, True)]),
        ("search count", res.n_reduced == 1),
        ("iso M11", res.n_reduced == 1 and is_isomorphic(res.reduced[0], FM) is not None),
    ])


# ---------------------------------------------------------------- 4, 5

def test_criterion_4_alternating_reduced():
    verdict(4, [
        ("A8 p=2", is_reduced(system("alt:8", 2)).reduced),
        ("A9 p=3", is_reduced(system("alt:9", 3)).reduced),
    ])


def test_criterion_5_out_table():
    verdict(5, [
        ("A8", fusion_preserving_auts(system("alt:8", 2)).out_order == 2),
        ("A9", fusion_preserving_auts(system("alt:9", 3)).out_order == 2),
        ("A11", fusion_preserving_auts(system("alt:11", 3)).out_order == 1),
    ])


# ---------------------------------------------------------------- 6

def test_criterion_6_constrained_iff_trivial_reduction():
    cases = [(sel, inner_system(from_selector(sel).group, p)) for sel, p in P_GROUPS]
    cases += [("sym:4", system("sym:4", 2)), ("sym:3@3", system("sym:3", 3)),
              ("alt:6", a6_system())]
    checks = [(name, is_constrained(F) == reduce(F).trivial) for name, F in cases]
    checks.append(("A6 negative", not is_constrained(a6_system()) and not reduce(a6_system()).trivial))
    checks.append(("Sigma4 positive", is_constrained(system("sym:4", 2))))
    verdict(6, checks)


# ---------------------------------------------------------------- 7

def _product_checks(label, F1, F2):
    pd = product_system(F1, F2)
    X = pd.system
    H, E = oppower_subsystem(X)
    H1, _ = oppower_subsystem(F1)
    H2, _ = oppower_subsystem(F2)
    X0, g = opprime_subsystem(X)
    _, g1 = opprime_subsystem(F1)
    _, g2 = opprime_subsystem(F2)
    checks = [
        (f"{label} O_p", op_core_F(X) == product_node(pd, op_core_F(F1), op_core_F(F2))),
        (f"{label} hyp", hyperfocal(X) == product_node(pd, hyperfocal(F1), hyperfocal(F2))),
        (f"{label} O^p", E.node_up(H.L.top) == product_node(pd, H1.L.top, H2.L.top)
         and same_system(H, X) == (same_system(H1, F1) and same_system(H2, F2))),
        (f"{label} O^p'", g == g1 * g2 and same_system(X0, X)),
    ]
    rng = random.Random(0)
    n1, n2 = len(F1.L), len(F2.L)
    homs_ok = True
    for _ in range(30):
        P1, Q1 = rng.randrange(n1), rng.randrange(n1)
        P2, Q2 = rng.randrange(n2), rng.randrange(n2)
        homs_ok &= X.hom_count(product_node(pd, P1, P2), product_node(pd, Q1, Q2)) == \
            F1.hom_count(P1, Q1) * F2.hom_count(P2, Q2)
    checks.append((f"{label} hom sets", homs_ok))
    fac = factorize(X)
    d1 = F1.S.degree
    recovered = sorted(fac.nodes) == sorted(pd.nodes)
    for node, Fi, _ in fac.factors:
        Fk, off = (F1, 0) if node == pd.nodes[0] else (F2, d1)
        recovered &= equal_under(Fk, Fi, embed_by_perms(Fk.L, Fi.L, off))
    checks.append((f"{label} factorize", recovered))
    return checks


def test_criterion_7_products():
    A6 = a6_system()
    verdict(7, _product_checks("A6xA6", A6, A6) +
            _product_checks("A6xPSL2(7)", A6, system("psl2:7", 2)))


# ---------------------------------------------------------------- 8

def _c4_with_inversion():
    L = build_lattice(cyclic(4), 2)
    return system_from_assignments(L, {L.top: [Perm(map(int, L.S.table.inv))]})


def _alperin_ok(F, samples=100):
    rng = random.Random(1)
    n = len(F.L)
    ess = set(F.essential_subgroups())
    for _ in range(samples):
        P, Q = rng.randrange(n), rng.randrange(n)
        homs = F.hom_set(P, Q)
        if not homs:
            Q = F.L.top
            homs = F.hom_set(P, Q)
        phi = rng.choice(homs)
        steps = alperin_decompose(F, phi)
        e = F.elems[P]
        if not np.array_equal(compose_steps(F, P, steps)[e], phi.gmap[e]):
            return False
        if any(st.subgroup != F.L.top and st.subgroup not in ess for st in steps):
            return False
    return True


def _focal_ok(sel, p):
    F = system(sel, p)
    G = from_selector(sel).group
    T, L = F.S.table, F.L
    foc, hyp = focal(F), hyperfocal(F)
    comm = T.commutator_subgroup(T.full(), T.full())
    D, H = derived_subgroup(G), op_power_residual(G, p)
    return (foc == L.id_of(T.product(L.nodes[hyp].mask, comm))
            and foc == L.id_of(np.array([D.contains(x) for x in F.S.perms]))
            and hyp == L.id_of(np.array([H.contains(x) for x in F.S.perms])))


def _quotients_ok(F):
    for Q in range(len(F.L)):
        if is_strongly_closed(F, Q):
            qd = quotient_system(F, Q)
            if not check_saturation(qd.system).saturated or fully_normalized_correspondence(F, qd):
                return False
    return True


PROBE = [("sym:3", 3), ("sym:4", 2), ("alt:4", 2), ("alt:5", 2), ("dihedral:3", 2),
         ("psl2:7", 2), ("alt:6", 2), ("psl2:9", 2)]


def test_criterion_8_property_suites():
    checks = []
    sat = all(check_saturation(system(s, p)).saturated for s, p in STANDARD)
    checks.append(("a saturation", sat and not check_saturation(_c4_with_inversion()).saturated))
    centrad = True
    for s, p in STANDARD:
        F = system(s, p)
        for info in F.f_classes():
            for P in info.fully_normalized_reps:
                lhs, rhs = centrad_check(F, P)
                centrad &= lhs == rhs
    checks.append(("b centrad", centrad))
    normal = True
    for s, p in STANDARD:
        F = system(s, p)
        for cl in F.L.s_classes:
            if len(cl) == 1:
                normal &= is_normal(F, cl[0]) == is_normal_by_definition(F, cl[0])
    checks.append(("c normality", normal))
    checks.append(("d Alperin", all(_alperin_ok(system(s, p)) for s, p in STANDARD)))
    checks.append(("e focal", all(_focal_ok(s, p) for s, p in STANDARD)))
    checks.append(("f quotients", _quotients_ok(system("sym:4", 2)) and _quotients_ok(a6_system())))
    probe = True
    for s, p in PROBE:
        r = mu_kappa_report(from_selector(s).group, p, F=system(s, p))
        probe &= _is_p_power(r.ker_mu_lower, p) and _is_p_power(r.ker_mu_upper, p)
    checks.append(("g Ker(mu) p-power", probe))
    verdict(8, checks)
