import pytest

from conftest import system
from fusionkit.catalog import dihedral, elem_abelian, quaternion, semidihedral
from fusionkit.errors import CapacityError
from fusionkit.fusion import is_saturated, system_from_assignments
from fusionkit.fusionops import is_isomorphic
from fusionkit.plattice import build_lattice
from fusionkit.reduction import is_reduced
from fusionkit.search import count_reduced, essential_candidates, search_reduced


def _full_aut_system(L):
    cands = essential_candidates(L)
    return system_from_assignments(L, {c.node: c.choices[c.orders.index(6)] for c in cands})


def test_d8_candidates_are_the_two_klein_fours():
    L = build_lattice(dihedral(3), 2)
    cands = essential_candidates(L)
    assert [L.nodes[c.node].order for c in cands] == [4, 4]
    assert all(c.orders == [6] for c in cands)


def test_d8_generated_system_is_reduced_and_matches_groups():
    F = _full_aut_system(build_lattice(dihedral(3), 2))
    assert is_saturated(F)
    assert is_reduced(F).reduced
    assert is_isomorphic(F, system("alt:6", 2)) is not None
    assert is_isomorphic(F, system("psl2:7", 2)) is not None


def test_d8_search_finds_one_system():
    res = search_reduced(build_lattice(dihedral(3), 2))
    assert res.n_reduced == 1
    assert is_isomorphic(res.reduced[0], system("alt:6", 2)) is not None


def test_sd16_search_finds_m11():
    L = build_lattice(semidihedral(4), 2)
    res = search_reduced(L)
    assert res.n_reduced == 1
    assert is_isomorphic(res.reduced[0], system("m11", 2)) is not None


def test_sd16_candidates():
    L = build_lattice(semidihedral(4), 2)
    got = sorted((L.nodes[c.node].order, c.orders) for c in essential_candidates(L))
    assert got == [(4, [6]), (8, [24])]


@pytest.mark.parametrize("G", [quaternion(3), elem_abelian(2, 2)])
def test_no_reduced_systems_without_candidates(G):
    L = build_lattice(G, 2)
    assert essential_candidates(L) == []
    assert count_reduced(L) == 0


def test_search_cap():
    with pytest.raises(CapacityError):
        search_reduced(build_lattice(dihedral(3), 2), max_systems=1)
