import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fusionkit.catalog import from_selector  # noqa: E402
from fusionkit.fusion import fusion_from_group  # noqa: E402
from fusionkit.perm import Perm  # noqa: E402
from fusionkit.permgrp import PermGroup  # noqa: E402

# Sylow 2-subgroup of A6 containing both Klein fours used in the worked example
A6_SYLOW = ["(1 2)(3 4)", "(1 3)(2 4)", "(3 4)(5 6)"]
T1_GENS = ["(1 2)(3 4)", "(1 3)(2 4)"]
T2_GENS = ["(1 2)(3 4)", "(3 4)(5 6)"]


def perms(texts, n):
    return [Perm.parse(t, n) for t in texts]


def group(texts, n) -> PermGroup:
    return PermGroup(n, perms(texts, n))


# fixed Sylow subgroups where tests name specific subgroups
SYLOWS = {("sym:4", 2): ["(1 2 3 4)", "(1 3)"]}


@functools.lru_cache(maxsize=None)
def system(sel: str, p: int):
    """Group-backed system for a catalog selector, shared across tests."""
    G = from_selector(sel).group
    syl = SYLOWS.get((sel, p))
    S = group(syl, G.degree) if syl else None
    return fusion_from_group(G, p, sylow=S, name=sel)


@functools.lru_cache(maxsize=None)
def a6_system():
    G = from_selector("alt:6").group
    return fusion_from_group(G, 2, sylow=group(A6_SYLOW, 6), name="alt:6")


def node_of(F, texts):
    """Lattice node of the subgroup of ``S`` generated by the given cycles."""
    n = F.S.degree
    return F.L.id_of(F.S.table.closure([F.S.index_of(g) for g in perms(texts, n)]))


def as_tuples(rows):
    return frozenset(tuple(int(x) for x in r) for r in rows)


@pytest.fixture
def a6():
    return a6_system()
