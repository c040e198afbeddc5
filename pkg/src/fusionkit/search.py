"""Exhaustive search for saturated, reduced fusion systems over a fixed p-group.

Candidates are S-class representatives ``P < S`` with ``C_S(P) <= P`` together
with subgroups ``D <= Aut(P)`` in which ``Aut_S(P)`` is Sylow and ``D/Inn(P)``
has a strongly p-embedded subgroup.  Every subset of candidate classes with
every choice of ``D`` (and of ``Aut_F(S)``) generates a system, which is then
tested.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import CapacityError
from .fusion import FusionSystem, is_saturated, system_from_assignments
from .fusionops import is_isomorphic, node_table, table_isomorphisms
from .perm import Perm
from .permgrp import p_part
from .plattice import Lattice
from .reduction import is_reduced
from .tablegroup import table_from_perms


@dataclass
class Candidate:
    node: int
    choices: list  # list of lists of local perms (generators of D)
    orders: list


@dataclass
class SearchResult:
    candidates: list
    tried: int = 0
    saturated: int = 0
    reduced: list = field(default_factory=list)  # one system per isomorphism class

    @property
    def n_reduced(self) -> int:
        return len(self.reduced)


def _aut_overgroups(L: Lattice, node: int, base_perms, p: int, need_embedded: bool,
                    max_aut: int) -> list:
    """Subgroups of ``Aut(node)`` having ``<base_perms>`` as a Sylow p-subgroup."""
    T = node_table(L, node)
    auts = list(table_isomorphisms(T, T, limit=max_aut))
    Atab, rows, idx = table_from_perms([tuple(int(x) for x in a) for a in auts])
    base = Atab.closure(idx.lookup(np.array([tuple(b) for b in base_perms], dtype=np.int64))
                        if base_perms else [])
    bsize = int(base.sum())
    # inner automorphisms of the node
    inn_rows = np.unique(T.conj, axis=0)
    inn = Atab.closure(idx.lookup(inn_rows))
    out = []
    for D in Atab.subgroups():
        if not (base & ~D).sum() == 0:
            continue
        d = int(D.sum())
        if p_part(d, p) != bsize:
            continue
        if need_embedded and not Atab.has_strongly_embedded(p, modulo=inn, within=D):
            continue
        gens = [Perm(map(int, rows[i])) for i in _gens(Atab, D)]
        out.append((d, gens))
    out.sort(key=lambda t: (t[0], [tuple(g) for g in t[1]]))
    return out


def _gens(T, mask):
    from .plattice import generators_of

    return generators_of(T, mask)


def essential_candidates(L: Lattice, max_aut: int = 10_000) -> list[Candidate]:
    p = L.p
    out = []
    T = L.S.table
    for cl in L.s_classes:
        P = cl[0]
        if P == L.top or not L.is_sub(L.centralizer(P), P):
            continue
        # work at a member with the largest normalizer
        P = max(cl, key=lambda m: (L.nodes[L.normalizer(m)].order, -m))
        e = L.elements(P)
        loc = np.full(L.S.n, -1, dtype=np.int64)
        loc[e] = np.arange(len(e))
        autS = [Perm(map(int, loc[T.conj[g, e]])) for g in L.nodes[L.normalizer(P)].generators]
        opts = _aut_overgroups(L, P, autS, p, True, max_aut)
        if opts:
            out.append(Candidate(P, [g for _, g in opts], [d for d, _ in opts]))
    return out


def search_reduced(L: Lattice, only: list[int] | None = None, max_aut: int = 10_000,
                   max_systems: int = 100_000) -> SearchResult:
    """Enumerate assignments and keep saturated reduced systems up to isomorphism."""
    cands = essential_candidates(L, max_aut)
    if only is not None:
        keep = {L.nodes[i].class_id for i in only}
        cands = [c for c in cands if L.nodes[c.node].class_id in keep]
    T = L.S.table
    top = L.top
    inn_top = [Perm(map(int, T.conj[g])) for g in L.nodes[top].generators]
    top_opts = [g for _, g in _aut_overgroups(L, top, inn_top, L.p, False, max_aut)]
    res = SearchResult(cands)
    for mask in range(1, 1 << len(cands)):
        chosen = [c for i, c in enumerate(cands) if mask >> i & 1]
        for top_gens in top_opts:
            for combo in product(*[c.choices for c in chosen]):
                res.tried += 1
                if res.tried > max_systems:
                    raise CapacityError(f"more than {max_systems} candidate systems")
                assign = {top: top_gens}
                for c, gens in zip(chosen, combo):
                    assign[c.node] = gens
                F = system_from_assignments(L, assign)
                if not is_saturated(F):
                    continue
                res.saturated += 1
                if not is_reduced(F).reduced:
                    continue
                if not any(is_isomorphic(F, G) is not None for G in res.reduced):
                    res.reduced.append(F)
    return res


def count_reduced(L: Lattice, **kw) -> int:
    return search_reduced(L, **kw).n_reduced


__all__ = ["Candidate", "SearchResult", "essential_candidates", "search_reduced",
           "count_reduced", "FusionSystem"]
