from math import factorial

import pytest

import oracles as O
from fusionkit.catalog import STANDARD, from_selector, m11, psl2, semidihedral
from fusionkit.errors import InputError
from fusionkit.fusionops import table_isomorphisms
from fusionkit.permgrp import sylow_subgroup
from fusionkit.plattice import PGroup

EXPECTED = {
    "dihedral:3": 8, "dihedral:4": 16, "quaternion:3": 8, "semidihedral:4": 16,
    "elemab:2:2": 4, "elemab:3:2": 9, "cyclic:4": 4, "sym:3": 6, "sym:4": 24,
    "alt:4": 12, "alt:5": 60, "alt:6": 360, "psl2:7": 168, "psl2:9": 360,
    "m11": 7920, "alt:8": factorial(8) // 2, "alt:9": 181440, "alt:11": factorial(11) // 2,
}


@pytest.mark.parametrize("sel,p", STANDARD)
def test_standard_orders(sel, p):
    e = from_selector(sel)
    assert e.group.order == EXPECTED[sel]
    assert e.check()


@pytest.mark.parametrize("sel", ["dihedral:3", "quaternion:3", "semidihedral:4", "sym:4",
                                 "alt:5", "psl2:5", "elemab:3:2"])
def test_small_orders_match_closure(sel):
    G = from_selector(sel).group
    assert len(O.closure([tuple(g) for g in G.gens], G.degree)) == G.order


def test_psl2_orders():
    assert psl2(5).order == 60
    assert psl2(7).order == 168
    assert psl2(9).order == 360
    assert psl2(11).order == 660


def _elements_of_order(G, k):
    return [g for g in G.element_list() if g.order() == k]


def _is_semidihedral16(G):
    # <x, y | x^8 = y^2 = 1, y x y = x^3>
    for x in _elements_of_order(G, 8):
        x3 = x * x * x
        for y in _elements_of_order(G, 2):
            if y * x * y == x3:
                return True
    return False


def test_semidihedral_relation():
    G = semidihedral(4)
    assert G.order == 16
    assert _is_semidihedral16(G)


def test_psl2_sylow_two_is_dihedral():
    for q in (7, 9):
        S = sylow_subgroup(psl2(q), 2)
        assert S.order == 8
        orders = sorted(g.order() for g in S.element_list())
        assert orders == [1, 2, 2, 2, 2, 2, 4, 4]


def test_m11_sylow_two_is_semidihedral():
    G = m11()
    assert G.order == 7920
    S = sylow_subgroup(G, 2)
    assert S.order == 16 and _is_semidihedral16(S)
    T1, T2 = PGroup(S, 2).table, PGroup(semidihedral(4), 2).table
    assert next(table_isomorphisms(T1, T2), None) is not None


@pytest.mark.parametrize("bad", ["alt", "alt:x", "foo:3", "psl2:8", "elemab:2", "file:/nonexistent"])
def test_bad_selectors(bad):
    with pytest.raises((InputError, OSError)):
        from_selector(bad)


def test_file_selector(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("degree: 4\np: 2\ngenerators:\n(1 2 3 4)\n(1 2)\n")
    e = from_selector(f"file:{f}")
    assert e.group.order == 24 and e.default_p == 2
