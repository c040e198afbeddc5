"""Subgroup lattices of finite p-groups."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import CapacityError, InputError
from .perm import Perm
from .permgrp import PermGroup, automorphism_group, is_prime, p_part
from .tablegroup import TableGroup

DEFAULT_MAX_S_ORDER = 512
DEFAULT_MAX_SUBGROUPS = 400_000


def mask_key(mask: np.ndarray) -> bytes:
    return np.packbits(mask).tobytes()


class PGroup:
    """A finite p-group with its elements enumerated and a Cayley table.

    Elements are indexed by the lexicographic order of their image tuples, so
    the identity has index 0.
    """

    def __init__(self, group: PermGroup, p: int, max_order: int = DEFAULT_MAX_S_ORDER):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if p_part(group.order, p) != group.order:
            raise InputError(f"group of order {group.order} is not a {p}-group")
        if group.order > max_order:
            raise CapacityError(f"|S| = {group.order} exceeds the cap {max_order}")
        self.group = group
        self.p = p
        self.degree = group.degree
        rows = group.elements()
        self.rows = rows
        self.index = K.RowIndex(rows, base=max(group.degree, 2))
        n = len(rows)
        mul = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            mul[a] = self.index.lookup(rows[a][rows])
        self.table = TableGroup(mul)
        self.n = n
        self.perms = [Perm(map(int, r)) for r in rows]
        self.gens = [self.index_of(g) for g in group.gens]

    @property
    def order(self) -> int:
        return self.n

    def index_of(self, g) -> int:
        i = int(self.index.lookup(np.asarray([tuple(g)], dtype=np.int64))[0])
        if i < 0:
            raise InputError(f"{Perm(g)} is not an element of S")
        return i

    def mask_of(self, H) -> np.ndarray:
        """Mask of a subgroup given as a PermGroup or a list of generators."""
        gens = H.gens if isinstance(H, PermGroup) else list(H)
        return self.table.closure([self.index_of(g) for g in gens])

    def perm_group(self, mask: np.ndarray) -> PermGroup:
        gens = generators_of(self.table, mask)
        return PermGroup(self.degree, [self.perms[i] for i in gens])

    def mul(self, a: int, b: int) -> int:
        return int(self.table.mul[a, b])

    def inv(self, a: int) -> int:
        return int(self.table.inv[a])


def generators_of(T: TableGroup, mask: np.ndarray) -> list[int]:
    """Greedy generating set: smallest elements not in the span so far."""
    cur = T.trivial()
    gens = []
    for x in np.flatnonzero(mask):
        if not cur[x]:
            gens.append(int(x))
            cur = T.closure(gens)
    return gens


def canonical_generators(T: TableGroup, mask: np.ndarray, p: int) -> tuple[int, ...]:
    """Lexicographically least irredundant generating sequence of a p-subgroup.

    Irredundant generating sets are exactly lifts of bases of ``H/Phi(H)``, so
    choosing the smallest element outside ``Phi(H)<chosen>`` at each step gives
    the least sequence.
    """
    phi = T.frattini(mask, p)
    cur = phi
    gens: list[int] = []
    base = np.flatnonzero(phi)
    for x in np.flatnonzero(mask):
        if not cur[x]:
            gens.append(int(x))
            cur = T.closure(np.concatenate([base, gens]))
    return tuple(gens)


@dataclass
class SubgroupRef:
    lattice_id: int
    generators: tuple
    order: int
    class_id: int
    mask: np.ndarray = field(repr=False)
    flags: dict = field(default_factory=dict, repr=False)

    def __eq__(self, other):
        return isinstance(other, SubgroupRef) and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(mask_key(self.mask))


class Lattice:
    """All subgroups of ``S`` with S-conjugacy classes and maximal inclusions."""

    def __init__(self, S: PGroup, nodes, children, classes, conj_elem):
        self.S = S
        self.nodes: list[SubgroupRef] = nodes
        self.children = children  # maximal subgroups of each node
        self.parents = [[] for _ in nodes]
        for a, ch in enumerate(children):
            for b in ch:
                self.parents[b].append(a)
        self.s_classes: list[list[int]] = classes
        self.conj_elem = conj_elem  # s with s * rep * s^-1 == node
        self._key = {mask_key(nd.mask): nd.lattice_id for nd in nodes}
        self.masks = np.array([nd.mask for nd in nodes])
        self.orders = np.array([nd.order for nd in nodes], dtype=np.int64)
        self._norm: dict = {}
        self._cent: dict = {}

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def p(self) -> int:
        return self.S.p

    def id_of(self, mask: np.ndarray) -> int:
        i = self._key.get(mask_key(mask))
        if i is None:
            raise InputError("mask is not a subgroup")
        return i

    def id_of_gens(self, gens) -> int:
        return self.id_of(self.S.table.closure(list(gens)))

    def class_rep(self, c: int) -> int:
        return self.s_classes[c][0]

    def elements(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.nodes[i].mask)

    def normalizer(self, i: int) -> int:
        if i not in self._norm:
            self._norm[i] = self.id_of(self.S.table.normalizer(self.nodes[i].mask))
        return self._norm[i]

    def centralizer(self, i: int) -> int:
        if i not in self._cent:
            self._cent[i] = self.id_of(self.S.table.centralizer(self.nodes[i].mask))
        return self._cent[i]

    def is_sub(self, a: int, b: int) -> bool:
        return not bool((self.nodes[a].mask & ~self.nodes[b].mask).any())

    def subgroups_of(self, i: int) -> np.ndarray:
        m = self.nodes[i].mask
        return np.flatnonzero(~(self.masks & ~m).any(axis=1))

    def overgroups_of(self, i: int) -> np.ndarray:
        m = self.nodes[i].mask
        return np.flatnonzero(~(m & ~self.masks).any(axis=1))

    def conjugate(self, s: int, i: int) -> int:
        return self.id_of(self.S.table.conjugate_mask(s, self.nodes[i].mask))

    @property
    def top(self) -> int:
        return len(self.nodes) - 1

    @property
    def bottom(self) -> int:
        return 0

    def perm_group(self, i: int) -> PermGroup:
        return PermGroup(self.S.degree, [self.S.perms[g] for g in self.nodes[i].generators])


def build_lattice(S, p: int | None = None, max_order: int = DEFAULT_MAX_S_ORDER,
                  max_subgroups: int = DEFAULT_MAX_SUBGROUPS) -> Lattice:
    """Subgroup lattice by cyclic extension, layer by layer in the order."""
    if isinstance(S, PermGroup):
        S = PGroup(S, p, max_order)
    T = S.table
    p = S.p
    pow_p = np.arange(T.n)
    for _ in range(p - 1):
        pow_p = T.mul[pow_p, np.arange(T.n)]
    found = {mask_key(T.trivial()): T.trivial()}
    edges: set = set()
    layer = [T.trivial()]
    while layer:
        nxt = {}
        for H in layer:
            hk = mask_key(H)
            hs = np.flatnonzero(H)
            cand = T.normalizer(H) & ~H & H[pow_p]
            done = np.zeros(T.n, dtype=bool)
            for x in np.flatnonzero(cand):
                if done[x]:
                    continue
                # <H, x> is the union of cosets x^i H
                Kmask = np.zeros(T.n, dtype=bool)
                y = 0
                for _ in range(p):
                    Kmask[T.mul[y, hs]] = True
                    y = int(T.mul[y, x])
                done |= Kmask
                kk = mask_key(Kmask)
                edges.add((kk, hk))
                if kk not in found and kk not in nxt:
                    nxt[kk] = Kmask
                    if len(found) + len(nxt) > max_subgroups:
                        raise CapacityError(f"more than {max_subgroups} subgroups")
        found.update(nxt)
        layer = list(nxt.values())
    entries = []
    for key, m in found.items():
        entries.append((int(m.sum()), canonical_generators(T, m, p), key, m))
    entries.sort(key=lambda e: (e[0], e[1]))
    key_to_id = {e[2]: i for i, e in enumerate(entries)}
    nodes = [SubgroupRef(i, e[1], e[0], -1, e[3]) for i, e in enumerate(entries)]
    children = [[] for _ in nodes]
    for kk, hk in edges:
        children[key_to_id[kk]].append(key_to_id[hk])
    for ch in children:
        ch.sort()
    # S-conjugacy classes; the representative is the least id
    classes = []
    conj_elem = [0] * len(nodes)
    gens = S.gens
    for i, nd in enumerate(nodes):
        if nd.class_id >= 0:
            continue
        c = len(classes)
        members = [i]
        nd.class_id = c
        conj_elem[i] = 0
        for j in members:
            for g in gens:
                k = key_to_id[mask_key(T.conjugate_mask(g, nodes[j].mask))]
                if nodes[k].class_id < 0:
                    nodes[k].class_id = c
                    conj_elem[k] = int(T.mul[g, conj_elem[j]])
                    members.append(k)
        classes.append(sorted(members))
    return Lattice(S, nodes, children, classes, conj_elem)


def brute_force_subgroups(T: TableGroup) -> list[np.ndarray]:
    """All subsets closed under multiplication, by subset enumeration (tiny groups)."""
    n = T.n
    if n > 20:
        raise CapacityError("subset enumeration limited to order 20")
    out = []
    for bits in range(1 << (n - 1)):
        m = np.zeros(n, dtype=bool)
        m[0] = True
        for i in range(1, n):
            if bits >> (i - 1) & 1:
                m[i] = True
        xs = np.flatnonzero(m)
        if m[T.mul[np.ix_(xs, xs)]].all():
            out.append(m)
    return out


def aut_p_group(P: PermGroup, cap: int = 10_000):
    """All automorphisms of a small p-group as generator-image maps."""
    return automorphism_group(P, cap=cap)


def normal_subgroups(L: Lattice) -> list[int]:
    return [c[0] for c in L.s_classes if len(c) == 1]


def direct_factorizations(L: Lattice) -> list[tuple[int, ...]]:
    """Every decomposition of S as an internal direct product of normal subgroups."""
    normals = normal_subgroups(L)
    top = L.top

    def decs(x: int, min_id: int):
        out = []
        ox = L.nodes[x].order
        for a in normals:
            if a < min_id or a == 0 or a == x or not L.is_sub(a, x):
                continue
            oa = L.nodes[a].order
            for b in normals:
                if b <= a or b == x or not L.is_sub(b, x):
                    continue
                if oa * L.nodes[b].order != ox:
                    continue
                if (L.nodes[a].mask & L.nodes[b].mask).sum() != 1:
                    continue
                out.append((a, b))
                for d in decs(b, a + 1):
                    out.append((a,) + d)
        return out

    result = [(top,)] + decs(top, 1)
    return sorted(set(result), key=lambda t: (len(t), t))


def upper_central_series_masks(T: TableGroup, P: np.ndarray) -> list[np.ndarray]:
    series = [T.center(P)]
    while not np.array_equal(series[-1], P):
        Z = series[-1]
        ps = np.flatnonzero(P)
        comm = T.mul[T.mul[np.ix_(T.inv[ps], T.inv[ps])], T.mul[np.ix_(ps, ps)]]
        nxt = np.zeros(T.n, dtype=bool)
        nxt[ps[Z[comm].all(axis=1)]] = True
        if np.array_equal(nxt, Z):
            raise InputError("group is not nilpotent")
        series.append(nxt)
    return series


def upper_central_series(P: PermGroup, p: int | None = None) -> list[PermGroup]:
    if p is None:
        o = P.order
        p = next((q for q in range(2, o + 1) if o % q == 0), 2)
    G = PGroup(P, p, max_order=max(P.order, DEFAULT_MAX_S_ORDER))
    return [G.perm_group(m) for m in upper_central_series_masks(G.table, G.table.full())]
