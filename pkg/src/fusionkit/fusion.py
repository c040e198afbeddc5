"""Fusion systems over finite p-groups.

A fusion system is stored through its conjugacy classes of subgroups.  Each
class has a representative ``R`` (fully normalized, least lattice id among
those), the group ``Aut_F(R)`` as permutations of the sorted elements of
``R``, and for every member ``P`` an isomorphism ``tau_P: R -> P``.  Then

    Hom_F(P, Q) = { incl o tau_P' o a o tau_P^-1 : P' <= Q in the class, a in Aut_F(R) }

which determines every morphism set without listing them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, InputError, InternalError
from .perm import Perm
from .permgrp import (PermGroup, normalizer_search, op_core, op_power_residual,
                      opprime_residual, p_part, subgroup_conjugator, sylow_subgroup)
from .plattice import (DEFAULT_MAX_S_ORDER, Lattice, PGroup, build_lattice,
                       mask_key)

DEFAULT_MAX_MORPHISMS = 1_000_000
# process-wide caps, adjustable from the command line
LIMITS = {"max_morphisms": DEFAULT_MAX_MORPHISMS}
ENUM_LIMIT = 200_000


def conjugate_rows_by(g, rows: np.ndarray) -> np.ndarray:
    """Rows of ``g r g^-1`` for each row ``r``."""
    g = np.asarray(g, dtype=np.int64)
    out = np.empty_like(rows)
    out[:, g] = g[rows]
    return out


# ---------------------------------------------------------------- morphisms

class InjHom:
    """An injective homomorphism between subgroups of two p-groups.

    ``gmap`` is indexed by the elements of the source ambient group and holds
    the image index in the target ambient group (``-1`` off the source).
    """

    __slots__ = ("src", "source", "dst", "target", "gmap")

    def __init__(self, src: Lattice, source: int, dst: Lattice, target: int,
                 gmap: np.ndarray, check: bool = True):
        self.src = src
        self.source = source
        self.dst = dst
        self.target = target
        self.gmap = np.asarray(gmap, dtype=np.int64)
        if check:
            self.validate()

    def validate(self):
        P = self.src.elements(self.source)
        img = self.gmap[P]
        if (img < 0).any() or len(np.unique(img)) != len(P):
            raise InputError("map is not injective on its source")
        if not self.dst.nodes[self.target].mask[img].all():
            raise InputError("image is not inside the target")
        ms = self.src.S.table.mul
        md = self.dst.S.table.mul
        if not np.array_equal(self.gmap[ms[np.ix_(P, P)]], md[np.ix_(img, img)]):
            raise InputError("map is not a homomorphism")

    @property
    def images(self) -> dict:
        """Images of the source's canonical generators, as permutations."""
        gens = self.src.nodes[self.source].generators
        return {self.src.S.perms[g]: self.dst.S.perms[int(self.gmap[g])] for g in gens}

    def key(self):
        gens = self.src.nodes[self.source].generators
        return (self.source, self.target, tuple(int(self.gmap[g]) for g in gens))

    def __eq__(self, other):
        return isinstance(other, InjHom) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def image_node(self) -> int:
        m = np.zeros(self.dst.S.n, dtype=bool)
        m[self.gmap[self.src.elements(self.source)]] = True
        return self.dst.id_of(m)

    def __call__(self, x: int) -> int:
        return int(self.gmap[x])

    def compose(self, first: "InjHom") -> "InjHom":
        """``self o first``."""
        g = np.full(first.src.S.n, -1, dtype=np.int64)
        P = first.src.elements(first.source)
        g[P] = self.gmap[first.gmap[P]]
        return InjHom(first.src, first.source, self.dst, self.target, g, check=False)

    def __repr__(self):
        im = ", ".join(f"{a}->{b}" for a, b in self.images.items())
        return f"InjHom({im})"


# ---------------------------------------------------------------- classes

@dataclass
class FClassInfo:
    class_id: int
    rep: int
    members: list
    fully_normalized_reps: list
    fully_centralized_reps: list
    centric: bool
    radical: bool
    essential: bool
    aut_order: int
    out_order: int
    flags: dict = field(default_factory=dict)


class _Class:
    __slots__ = ("rep", "members", "aut")

    def __init__(self, rep, members, aut):
        self.rep = rep
        self.members = members
        self.aut = aut


def _local_perm(gmap: np.ndarray, elems: np.ndarray, loc: np.ndarray) -> Perm:
    return Perm(map(int, loc[gmap[elems]]))


class FusionSystem:
    """A fusion system over ``S``, either realized by a group or generated."""

    def __init__(self, L: Lattice, classes, node_class, tau, *, kind="table",
                 G: PermGroup | None = None, gconj=None, name: str = ""):
        self.L = L
        self.S = L.S
        self.p = L.S.p
        self.kind = kind
        self.G = G
        self.gconj = gconj
        self.name = name
        self._classes = classes
        self.node_class = np.asarray(node_class, dtype=np.int64)
        self.tau = tau
        n = self.S.n
        self.elems = [L.elements(i) for i in range(len(L))]
        self.loc = []
        self.invtau = []
        for i in range(len(L)):
            lc = np.full(n, -1, dtype=np.int64)
            lc[self.elems[i]] = np.arange(len(self.elems[i]))
            self.loc.append(lc)
            it = np.full(n, -1, dtype=np.int64)
            it[tau[i]] = np.arange(len(tau[i]))
            self.invtau.append(it)
        self._aut_cache: dict = {}
        self._auts_cache: dict = {}
        self._info = None
        self._elem_class = None
        self._ng_cache: dict = {}

    # -- basic accessors
    @property
    def order_S(self) -> int:
        return self.S.n

    def n_classes(self) -> int:
        return len(self._classes)

    def class_of(self, node: int) -> int:
        return int(self.node_class[node])

    def class_rep(self, c: int) -> int:
        return self._classes[c].rep

    def class_members(self, c: int) -> list:
        return self._classes[c].members

    def rep_aut(self, c: int) -> PermGroup:
        return self._classes[c].aut

    def gmap_of_local(self, node: int, a) -> np.ndarray:
        """Global map of a local automorphism of ``node``."""
        g = np.full(self.S.n, -1, dtype=np.int64)
        e = self.elems[node]
        g[e] = e[np.asarray(a, dtype=np.int64)]
        return g

    def iso_gmap(self, src: int, dst: int, a) -> np.ndarray:
        """``tau_dst o a o tau_src^-1`` as a global map (``src``, ``dst`` in one class)."""
        g = np.full(self.S.n, -1, dtype=np.int64)
        e = self.elems[src]
        g[e] = self.tau[dst][np.asarray(a, dtype=np.int64)[self.invtau[src][e]]]
        return g

    def aut(self, node: int) -> PermGroup:
        """``Aut_F(P)`` acting on the local indices of ``P``."""
        if node not in self._aut_cache:
            c = self.class_of(node)
            A = self._classes[c].aut
            if node == self._classes[c].rep:
                self._aut_cache[node] = A
            else:
                gens = [self._transport_local(node, a) for a in A.gens]
                self._aut_cache[node] = PermGroup(len(self.elems[node]), gens)
        return self._aut_cache[node]

    def _transport_local(self, node: int, a) -> Perm:
        e = self.elems[node]
        img = self.tau[node][np.asarray(a, dtype=np.int64)[self.invtau[node][e]]]
        return Perm(map(int, self.loc[node][img]))

    def aut_gmaps(self, node: int) -> list:
        return [self.gmap_of_local(node, a) for a in self.aut(node).gens]

    def aut_S(self, node: int) -> PermGroup:
        """``Aut_S(P)`` on local indices."""
        return PermGroup(len(self.elems[node]), self.aut_S_gens(node))

    def aut_S_gens(self, node: int) -> list:
        T = self.S.table
        N = self.L.nodes[self.L.normalizer(node)]
        e = self.elems[node]
        return [Perm(map(int, self.loc[node][T.conj[g, e]])) for g in N.generators]

    def inn_order(self, node: int) -> int:
        T = self.S.table
        m = self.L.nodes[node].mask
        return int(m.sum()) // int(T.center(m).sum())

    def aut_order(self, node: int) -> int:
        return self._classes[self.class_of(node)].aut.order

    def aut_elements(self, c: int) -> np.ndarray:
        if c not in self._auts_cache:
            A = self._classes[c].aut
            if A.order > ENUM_LIMIT:
                raise CapacityError(f"|Aut_F(P)| = {A.order} too large to enumerate")
            self._auts_cache[c] = A.elements()
        return self._auts_cache[c]

    # -- morphism sets
    def iso_set(self, P: int, Q: int) -> list:
        c = self.class_of(P)
        if self.class_of(Q) != c:
            return []
        return [InjHom(self.L, P, self.L, Q, self.iso_gmap(P, Q, a), check=False)
                for a in self.aut_elements(c)]

    def hom_count(self, P: int, Q: int) -> int:
        c = self.class_of(P)
        k = sum(1 for m in self._classes[c].members if self.L.is_sub(m, Q))
        return k * self._classes[c].aut.order

    def hom_set(self, P: int, Q: int, cap: int | None = None) -> list:
        cap = LIMITS["max_morphisms"] if cap is None else cap
        if self.hom_count(P, Q) > cap:
            raise CapacityError(f"hom set larger than {cap}")
        c = self.class_of(P)
        out = []
        for m in self._classes[c].members:
            if self.L.is_sub(m, Q):
                for a in self.aut_elements(c):
                    out.append(InjHom(self.L, P, self.L, Q, self.iso_gmap(P, m, a), check=False))
        return out

    def contains_map(self, P: int, gmap: np.ndarray) -> bool:
        """Whether a global map defined on ``P`` is a morphism of ``F``."""
        img = gmap[self.elems[P]]
        m = np.zeros(self.S.n, dtype=bool)
        m[img] = True
        try:
            Q = self.L.id_of(m)
        except InputError:
            return False
        c = self.class_of(P)
        if self.class_of(Q) != c:
            return False
        a = self.invtau[Q][gmap[self.tau[P]]]
        return self._classes[c].aut.contains(Perm(map(int, a)))

    def find_extension(self, X: int, points, images, within: int | None = None):
        """Some ``psi`` in ``Hom_F(X, S)`` with ``psi(points[i]) = images[i]``.

        ``within`` restricts the image to lie inside that node.
        """
        c = self.class_of(X)
        A = self._classes[c].aut
        xs = [int(self.invtau[X][x]) for x in points]
        for m in self._classes[c].members:
            if within is not None and not self.L.is_sub(m, within):
                continue
            ys = self.invtau[m][np.asarray(images, dtype=np.int64)]
            if (ys < 0).any():
                continue
            a = map_points(A, xs, [int(y) for y in ys])
            if a is not None:
                return self.iso_gmap(X, m, a)
        return None

    # -- elements
    def element_classes(self) -> np.ndarray:
        """Label of the F-conjugacy class of every element of ``S``."""
        if self._elem_class is None:
            n = self.S.n
            lab = np.full(n, -1, dtype=np.int64)
            lab[0] = 0
            k = 1
            T = self.S.table
            for x in range(1, n):
                if lab[x] >= 0:
                    continue
                C = self.L.id_of(T.closure([x]))
                c = self.class_of(C)
                A = self._classes[c].aut
                r = int(self.invtau[C][x])
                orb = np.array(sorted(_orbit_points(A, r)), dtype=np.int64)
                for m in self._classes[c].members:
                    lab[self.tau[m][orb]] = k
                k += 1
            self._elem_class = lab
        return self._elem_class

    # -- class data
    def f_classes(self) -> list[FClassInfo]:
        if self._info is None:
            self._info = [self._class_info(c) for c in range(len(self._classes))]
        return self._info

    def _class_info(self, c: int) -> FClassInfo:
        L = self.L
        cl = self._classes[c]
        mem = cl.members
        nsz = {m: L.nodes[L.normalizer(m)].order for m in mem}
        csz = {m: L.nodes[L.centralizer(m)].order for m in mem}
        mx_n = max(nsz.values())
        mx_c = max(csz.values())
        centric = all(L.is_sub(L.centralizer(m), m) for m in mem)
        R = cl.rep
        A = cl.aut
        inn = self.inn_order(R)
        radical = _op_core_order(A, self.p) == inn
        proper = R != L.top
        essential = bool(centric and proper and has_strongly_embedded(A, self.p, inn))
        return FClassInfo(c, R, list(mem), [m for m in mem if nsz[m] == mx_n],
                          [m for m in mem if csz[m] == mx_c], centric, radical,
                          essential, A.order, A.order // inn)

    def info_of(self, node: int) -> FClassInfo:
        return self.f_classes()[self.class_of(node)]

    def is_fully_normalized(self, node: int) -> bool:
        return node in self.info_of(node).fully_normalized_reps

    def is_fully_centralized(self, node: int) -> bool:
        return node in self.info_of(node).fully_centralized_reps

    def is_centric(self, node: int) -> bool:
        return self.info_of(node).centric

    def is_radical(self, node: int) -> bool:
        return self.info_of(node).radical

    def essential_classes(self) -> list[FClassInfo]:
        return [ci for ci in self.f_classes() if ci.essential]

    def essential_subgroups(self) -> list[int]:
        """All fully normalized members of essential classes."""
        out = []
        for ci in self.essential_classes():
            out += ci.fully_normalized_reps
        return sorted(out)

    def centric_radical_nodes(self) -> list[int]:
        out = []
        for ci in self.f_classes():
            if ci.centric and ci.radical:
                out += ci.members
        return sorted(out)

    def fingerprint(self):
        """``(|S|, class count, sorted (class size, |Aut_F|, flags))``."""
        items = []
        for ci in self.f_classes():
            flags = (ci.centric, ci.radical, ci.essential)
            items.append((len(ci.members), self.L.nodes[ci.rep].order, ci.aut_order, flags))
        return (self.S.n, len(items), tuple(sorted(items)))

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<FusionSystem{nm} p={self.p} |S|={self.S.n} classes={len(self._classes)} ({self.kind})>"


def _orbit_points(A: PermGroup, r: int) -> set:
    seen = {r}
    q = [r]
    for x in q:
        for g in A.gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                q.append(y)
    return seen


def map_points(A: PermGroup, xs, ys):
    """Some element of ``A`` with ``a(xs[i]) = ys[i]``, or ``None``."""
    pairs = {}
    for x, y in zip(xs, ys):
        if pairs.setdefault(x, y) != y:
            return None
    xs = list(pairs)
    ys = [pairs[x] for x in xs]
    if not xs:
        return Perm.identity(A.degree)
    if A.order <= 20_000:
        E = A.elements()
        hit = np.flatnonzero((E[:, xs] == np.asarray(ys)).all(axis=1))
        return Perm(map(int, E[hit[0]])) if hit.size else None
    chain = A.chain_for(xs)
    g = Perm.identity(A.degree)
    for lv, y in enumerate(ys):
        t = g.inverse()[y]
        u = chain.trans[lv].get(t)
        if u is None:
            return None
        g = g * u
    return g


def _op_core_order(A: PermGroup, p: int) -> int:
    return op_core(A, p).order


# ---------------------------------------------------------------- strongly p-embedded

def sylow_conjugates(A: PermGroup, p: int, limit: int = 100_000) -> list[frozenset]:
    T = sylow_subgroup(A, p)
    start = frozenset(map(tuple, T.elements()))
    seen = {start}
    order = [start]
    for X in order:
        for g in A.gens:
            Y = frozenset(tuple(g.conj(Perm(x))) for x in X)
            if Y not in seen:
                seen.add(Y)
                order.append(Y)
                if len(order) > limit:
                    raise CapacityError("too many Sylow subgroups")
    return order


def has_strongly_embedded(A: PermGroup, p: int, modulo_order: int = 1) -> bool:
    """Whether ``A/N`` has a strongly p-embedded subgroup.

    ``N`` is a normal p-subgroup of order ``modulo_order`` (for example
    ``Inn(P)`` inside ``Aut_F(P)``).  Sylow p-subgroups of ``A/N`` are the
    images of those of ``A``; the quotient has a strongly p-embedded subgroup
    exactly when ``p`` divides its order and the graph joining Sylows that
    meet in more than ``N`` is disconnected.
    """
    if p_part(A.order, p) == modulo_order:
        return False
    syl = sylow_conjugates(A, p)
    m = len(syl)
    if m == 1:
        return False
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(m):
        for j in range(i + 1, m):
            if len(syl[i] & syl[j]) > modulo_order:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    return len({find(i) for i in range(m)}) > 1


def is_strongly_p_embedded_present(G: PermGroup, p: int) -> bool:
    return has_strongly_embedded(G, p, 1)


def strongly_embedded_by_definition(G: PermGroup, p: int) -> bool:
    """Search all subgroups ``H`` for the defining property (small groups only)."""
    from .tablegroup import table_from_perms

    T, rows, _ = table_from_perms(G.elements())
    for H in T.subgroups():
        h = int(H.sum())
        if h == T.n or h % p:
            continue
        ok = True
        for g in np.flatnonzero(~H):
            inter = int((H & T.conjugate_mask(int(g), H)).sum())
            if inter % p == 0:
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------- construction

def _choose_rep(L: Lattice, members) -> int:
    best = max(L.nodes[L.normalizer(m)].order for m in members)
    return min(m for m in members if L.nodes[L.normalizer(m)].order == best)


def fusion_from_group(G: PermGroup, p: int, sylow: PermGroup | None = None,
                      max_s_order: int = DEFAULT_MAX_S_ORDER, name: str = "") -> FusionSystem:
    """``F_S(G)`` for a Sylow p-subgroup ``S`` of ``G``."""
    S = sylow if sylow is not None else sylow_subgroup(G, p)
    if sylow is not None:
        if not S.is_subgroup_of(G) or S.order != p_part(G.order, p):
            raise InputError("given subgroup is not a Sylow p-subgroup")
    PG = PGroup(S, p, max_s_order)
    L = build_lattice(PG)
    n_G = G.degree
    rows = PG.rows
    ctypes = [Perm(map(int, r)).cycle_type() for r in rows]
    # bucket S-class representatives by a conjugation invariant
    buckets: dict = {}
    leader_of: dict = {}
    h: dict = {}
    s_reps = [cl[0] for cl in L.s_classes]
    for X in s_reps:
        e = L.elements(X)
        inv = (len(e), tuple(sorted(ctypes[i] for i in e)))
        lst = buckets.setdefault(inv, [])
        gensX = [PG.perms[g] for g in L.nodes[X].generators]
        placed = False
        for Ld in lst:
            g = subgroup_conjugator(G, gensX, rows[L.elements(Ld)])
            if g is not None:
                leader_of[X] = Ld
                h[X] = g
                placed = True
                break
        if not placed:
            lst.append(X)
            leader_of[X] = X
            h[X] = Perm.identity(n_G)
    groups: dict = {}
    for X in s_reps:
        groups.setdefault(leader_of[X], []).append(X)
    node_class = np.full(len(L), -1, dtype=np.int64)
    gconj: list = [None] * len(L)
    classes = []
    leaders = sorted(groups, key=lambda Ld: min(groups[Ld]))
    for Ld in leaders:
        sreps = groups[Ld]
        members = sorted(m for X in sreps for m in L.s_classes[L.nodes[X].class_id])
        R = _choose_rep(L, members)
        # R may be a non-representative of its S-class; route through its S-class rep
        XR = L.s_classes[L.nodes[R].class_id][0]
        # element taking the leader to R
        lead_to_R = PG.perms[L.conj_elem[R]] * h[XR].inverse()
        for X in sreps:
            x_from_lead = h[X].inverse()
            for m in L.s_classes[L.nodes[X].class_id]:
                gconj[m] = PG.perms[L.conj_elem[m]] * x_from_lead * lead_to_R.inverse()
        c = len(classes)
        for m in members:
            node_class[m] = c
        classes.append(_Class(R, members, None))
    tau = [None] * len(L)
    for i in range(len(L)):
        R = classes[node_class[i]].rep
        conj = conjugate_rows_by(gconj[i], rows[L.elements(R)])
        tau[i] = PG.index.lookup(conj)
        if (tau[i] < 0).any():
            raise InternalError("conjugating element does not map into S")
    Fs = FusionSystem(L, classes, node_class, tau, kind="group", G=G, gconj=gconj, name=name)
    for c, cl in enumerate(classes):
        R = cl.rep
        e = L.elements(R)
        N = normalizer_search(G, [PG.perms[g] for g in L.nodes[R].generators], rows[e])
        Fs._ng_cache[R] = N
        gens = []
        for g in N.gens:
            img = PG.index.lookup(conjugate_rows_by(g, rows[e]))
            gens.append(Perm(map(int, Fs.loc[R][img])))
        cl.aut = PermGroup(len(e), gens)
    return Fs


def normalizer_in_G(F: FusionSystem, node: int) -> PermGroup:
    if F.G is None:
        raise InputError("system is not realized by a group")
    if node not in F._ng_cache:
        e = F.elems[node]
        F._ng_cache[node] = normalizer_search(
            F.G, [F.S.perms[g] for g in F.L.nodes[node].generators], F.S.rows[e])
    return F._ng_cache[node]


def inner_system(S, p: int | None = None, max_s_order: int = DEFAULT_MAX_S_ORDER) -> FusionSystem:
    """``F_S(S)``."""
    L = S if isinstance(S, Lattice) else build_lattice(S, p, max_s_order)
    return generated_system(L, [])


def generated_system(L: Lattice, generators, name: str = "",
                     max_morphisms: int | None = None) -> FusionSystem:
    """Fusion system over ``S`` generated by ``Inn(S)`` and the given isomorphisms.

    Each generator is ``(source node, global map)``.  Morphisms of the
    generated system are composites of restrictions of generators, so the
    conjugacy classes are the components of the graph whose edges are the
    restrictions of generators to every subgroup, and ``Aut_F(R)`` is
    generated by the Schreier elements of a spanning tree.
    """
    S = L.S
    n = S.n
    T = S.table
    if max_morphisms is None:
        max_morphisms = LIMITS["max_morphisms"]
    gens = []
    for g in S.gens:
        gm = T.conj[g].astype(np.int64)
        gens.append((L.top, gm))
    for src, gm in generators:
        gm = np.asarray(gm, dtype=np.int64)
        gens.append((int(src), gm))
    N = len(L)
    edges = [[] for _ in range(N)]  # (other node, gmap on this node's elems, direction)
    count = 0
    for src, gm in gens:
        for P in L.subgroups_of(src):
            P = int(P)
            e = L.elements(P)
            img = gm[e]
            m = np.zeros(n, dtype=bool)
            m[img] = True
            Q = L.id_of(m)
            g = np.full(n, -1, dtype=np.int64)
            g[e] = img
            edges[P].append((Q, g))
            count += 1
            if count > max_morphisms:
                raise CapacityError(f"closure exceeds {max_morphisms} generating restrictions")
    # reverse edges
    redges = [[] for _ in range(N)]
    for P in range(N):
        for Q, g in edges[P]:
            inv = np.full(n, -1, dtype=np.int64)
            e = L.elements(P)
            inv[g[e]] = e
            redges[Q].append((P, inv))
    node_class = np.full(N, -1, dtype=np.int64)
    classes = []
    tau: list = [None] * N
    for start in range(N):
        if node_class[start] >= 0:
            continue
        c = len(classes)
        node_class[start] = c
        tau[start] = L.elements(start).copy()
        comp = [start]
        dq = deque([start])
        while dq:
            P = dq.popleft()
            for Q, g in edges[P] + redges[P]:
                if node_class[Q] < 0:
                    node_class[Q] = c
                    tau[Q] = g[tau[P]]
                    comp.append(Q)
                    dq.append(Q)
        comp.sort()
        invt = {}
        for P in comp:
            it = np.full(n, -1, dtype=np.int64)
            it[tau[P]] = np.arange(len(tau[P]))
            invt[P] = it
        sgens = set()
        for P in comp:
            for Q, g in edges[P]:
                a = invt[Q][g[tau[P]]]
                sgens.add(tuple(int(x) for x in a))
        r = len(tau[start])
        A0 = PermGroup(r, [Perm(a) for a in sorted(sgens)])
        classes.append(_Class(start, comp, A0))
    # re-root every class at a fully normalized representative
    for cl in classes:
        R = _choose_rep(L, cl.members)
        R0 = cl.rep
        if R != R0:
            it = np.full(n, -1, dtype=np.int64)
            it[tau[R]] = np.arange(len(tau[R]))
            eR = L.elements(R)
            back = it[eR]  # local R0 index of each element of R (in R's local order)
            new_tau = {P: tau[P][back] for P in cl.members}
            # a' = back^-1 o a o back on R's local indices
            binv = np.empty_like(back)
            binv[back] = np.arange(len(back))
            A = PermGroup(len(eR), [Perm(map(int, binv[np.asarray(a)[back]])) for a in cl.aut.gens])
            for P in cl.members:
                tau[P] = new_tau[P]
            cl.aut = A
            cl.rep = R
        else:
            # tau[R] is already R's own sorted elements
            pass
    for cl in classes:
        if not np.array_equal(tau[cl.rep], L.elements(cl.rep)):
            # normalize so that tau_R is the identity on R
            e = L.elements(cl.rep)
            lc = np.full(n, -1, dtype=np.int64)
            lc[e] = np.arange(len(e))
            perm = lc[tau[cl.rep]]  # local R index of tau_R(i)
            pinv = np.empty_like(perm)
            pinv[perm] = np.arange(len(perm))
            cl.aut = PermGroup(len(e), [Perm(map(int, perm[np.asarray(a)[pinv]])) for a in cl.aut.gens])
            for P in cl.members:
                tau[P] = tau[P][pinv]
    return FusionSystem(L, classes, node_class, tau, kind="table", name=name)


def system_from_assignments(L: Lattice, assignments: dict, name: str = "") -> FusionSystem:
    """Generated system from automorphism groups at chosen subgroups.

    ``assignments`` maps a node to an iterable of local permutations (on the
    sorted elements of that node) or to a ``PermGroup`` of them.
    """
    gens = []
    for node, auts in assignments.items():
        e = L.elements(node)
        items = auts.gens if isinstance(auts, PermGroup) else auts
        for a in items:
            g = np.full(L.S.n, -1, dtype=np.int64)
            g[e] = e[np.asarray(a, dtype=np.int64)]
            gens.append((node, g))
    return generated_system(L, gens, name=name)


# ---------------------------------------------------------------- saturation

@dataclass
class SaturationReport:
    saturated: bool
    violations: list

    def __bool__(self):
        return self.saturated


def check_saturation(F: FusionSystem, stop_early: bool = False) -> SaturationReport:
    """Check axioms (I) and (II) on every class."""
    L = F.L
    T = F.S.table
    p = F.p
    viol = []
    s_rep = {cl[0] for cl in L.s_classes}
    for info in F.f_classes():
        A_order = info.aut_order
        for P in info.fully_normalized_reps:
            if P not in s_rep:
                continue
            if P not in info.fully_centralized_reps:
                viol.append({"axiom": "I", "subgroup": P, "reason": "fully normalized but not fully centralized"})
            aS = F.aut_S(P)
            if aS.order != p_part(A_order, p):
                viol.append({"axiom": "I", "subgroup": P,
                             "reason": f"|Aut_S(P)| = {aS.order} but p-part of |Aut_F(P)| = {p_part(A_order, p)}"})
            AP = F.aut(P)
            if not all(AP.contains(g) for g in aS.gens):
                viol.append({"axiom": "I", "subgroup": P, "reason": "Aut_S(P) not inside Aut_F(P)"})
        if stop_early and viol:
            return SaturationReport(False, viol)
    # axiom II
    for info in F.f_classes():
        c = info.class_id
        sources = [m for m in info.members if m in s_rep]
        targets = [m for m in info.fully_centralized_reps if m in s_rep]
        for P in sources:
            NP = L.normalizer(P)
            nP = L.elements(NP)
            eP = F.elems[P]
            gensP = list(L.nodes[P].generators)
            for Pt in targets:
                autS_t = {tuple(a) for a in _group_elements(F.aut_S(Pt))}
                # isos P -> Pt modulo Aut_S(Pt) on the left
                seen = set()
                for a in F.aut_elements(c):
                    phi = F.iso_gmap(P, Pt, a)
                    key = min(tuple(int(x) for x in F.loc[Pt][F.gmap_of_local(Pt, b)[phi[eP]]])
                              for b in autS_t)
                    if key in seen:
                        continue
                    seen.add(key)
                    # N_phi
                    inv_phi = np.full(F.S.n, -1, dtype=np.int64)
                    inv_phi[phi[eP]] = eP
                    eT = F.elems[Pt]
                    keep = []
                    for g in nP:
                        # phi c_g phi^-1 on Pt, as local perm
                        m = phi[T.conj[g, inv_phi[eT]]]
                        if tuple(int(x) for x in F.loc[Pt][m]) in autS_t:
                            keep.append(int(g))
                    Nphi = L.id_of(T.closure(keep))
                    ext = F.find_extension(Nphi, gensP, [int(phi[x]) for x in gensP])
                    if ext is None:
                        viol.append({"axiom": "II", "subgroup": P, "target": Pt,
                                     "map": [int(phi[x]) for x in gensP], "N_phi": Nphi})
                        if stop_early:
                            return SaturationReport(False, viol)
    return SaturationReport(not viol, viol)


def _group_elements(A: PermGroup):
    return [Perm(map(int, r)) for r in A.elements()]


def is_saturated(F: FusionSystem) -> bool:
    return check_saturation(F, stop_early=True).saturated


# ---------------------------------------------------------------- Alperin

@dataclass
class AlperinStep:
    subgroup: int  # essential subgroup or S
    automorphism: np.ndarray  # global map on that subgroup
    source: int
    target: int


def alperin_generators(F: FusionSystem):
    """``(E, gmap)`` for generators of ``Aut_F(E)``, ``E`` essential or ``S``."""
    out = []
    for E in F.essential_subgroups() + [F.L.top]:
        for g in F.aut_gmaps(E):
            out.append((E, g))
    return out


def alperin_decompose(F: FusionSystem, phi: InjHom) -> list[AlperinStep]:
    """Write ``phi`` as a composite of restrictions of automorphisms of essentials and ``S``."""
    L = F.L
    P = phi.source
    gensP = np.array(L.nodes[P].generators, dtype=np.int64)
    goal = tuple(int(x) for x in phi.gmap[gensP])
    start = tuple(int(x) for x in gensP)
    if start == goal:
        return []
    moves = alperin_generators(F)
    parent = {start: None}
    dq = deque([start])
    while dq:
        st = dq.popleft()
        cur_images = np.array(st, dtype=np.int64)
        X = L.id_of(F.S.table.closure(cur_images))
        for k, (E, g) in enumerate(moves):
            if not L.is_sub(X, E):
                continue
            nxt = tuple(int(x) for x in g[cur_images])
            if nxt in parent:
                continue
            parent[nxt] = (st, k, X)
            if nxt == goal:
                steps = []
                s = nxt
                while parent[s] is not None:
                    prev, kk, XX = parent[s]
                    E2, g2 = moves[kk]
                    img = np.zeros(F.S.n, dtype=bool)
                    img[g2[F.elems[XX]]] = True
                    steps.append(AlperinStep(E2, g2, XX, L.id_of(img)))
                    s = prev
                steps.reverse()
                return steps
            dq.append(nxt)
    raise InternalError("no Alperin decomposition found (system not saturated?)")


def compose_steps(F: FusionSystem, P: int, steps) -> np.ndarray:
    g = np.full(F.S.n, -1, dtype=np.int64)
    e = F.elems[P]
    cur = e.copy()
    for st in steps:
        cur = st.automorphism[cur]
    g[e] = cur
    return g


# ---------------------------------------------------------------- normality

def is_strongly_closed(F: FusionSystem, Q: int) -> bool:
    lab = F.element_classes()
    m = F.L.nodes[Q].mask
    inside = np.unique(lab[m])
    return bool(m[np.isin(lab, inside)].all())


def is_central(F: FusionSystem, Q: int) -> bool:
    """Definition: every morphism extends to one that is the identity on ``Q``."""
    L = F.L
    T = F.S.table
    if not L.is_sub(Q, L.id_of(T.center(T.full()))):
        return False
    gQ = list(L.nodes[Q].generators)
    for c in range(F.n_classes()):
        R = F.class_rep(c)
        RQ = L.id_of(T.closure(np.concatenate([F.elems[R], F.elems[Q]])))
        gR = list(L.nodes[R].generators)
        for m in F.class_members(c):
            for a in F.aut_elements(c):
                phi = F.iso_gmap(R, m, a)
                if F.find_extension(RQ, gR + gQ, [int(phi[x]) for x in gR] + gQ) is None:
                    return False
    return True


def is_normal_by_definition(F: FusionSystem, Q: int) -> bool:
    """Every morphism extends to ``PQ`` sending ``Q`` to itself."""
    if not is_strongly_closed(F, Q):
        return False
    L = F.L
    T = F.S.table
    for c in range(F.n_classes()):
        R = F.class_rep(c)
        RQ = L.id_of(T.closure(np.concatenate([F.elems[R], F.elems[Q]])))
        gR = list(L.nodes[R].generators)
        for m in F.class_members(c):
            for a in F.aut_elements(c):
                phi = F.iso_gmap(R, m, a)
                if F.find_extension(RQ, gR, [int(phi[x]) for x in gR]) is None:
                    return False
    return True


def is_normal(F: FusionSystem, Q: int) -> bool:
    """Strongly closed and inside every centric radical subgroup."""
    if not is_strongly_closed(F, Q):
        return False
    return all(F.L.is_sub(Q, P) for P in F.centric_radical_nodes())


def _strongly_closed_core(F: FusionSystem, mask: np.ndarray) -> np.ndarray:
    lab = F.element_classes()
    T = F.S.table
    cur = mask.copy()
    while True:
        bad = np.unique(lab[~cur])
        keep = cur & ~np.isin(lab, bad)
        nxt = T.closure(np.flatnonzero(keep))
        if np.array_equal(nxt, cur):
            return cur
        cur = nxt


def op_core_F(F: FusionSystem) -> int:
    """``O_p(F)``: largest strongly closed subgroup inside all centric radicals."""
    L = F.L
    m = np.ones(F.S.n, dtype=bool)
    for P in F.centric_radical_nodes():
        m &= L.nodes[P].mask
    return L.id_of(_strongly_closed_core(F, m))


def op_core_F_by_definition(F: FusionSystem) -> int:
    L = F.L
    T = F.S.table
    m = T.trivial()
    for cl in L.s_classes:
        if len(cl) == 1 and is_normal_by_definition(F, cl[0]):
            m = T.closure(np.flatnonzero(m | L.nodes[cl[0]].mask))
    return L.id_of(m)


def z_F(F: FusionSystem) -> int:
    """``Z(F)``: elements of ``Z(S)`` fixed by ``Aut_F(P)`` for every centric ``P``."""
    L = F.L
    T = F.S.table
    z = T.center(T.full())
    for info in F.f_classes():
        if not info.centric:
            continue
        for P in info.members:
            for g in F.aut_gmaps(P):
                zs = np.flatnonzero(z)
                z[zs[g[zs] != zs]] = False
    return L.id_of(T.closure(np.flatnonzero(z)))


def z_F_by_definition(F: FusionSystem) -> int:
    L = F.L
    T = F.S.table
    best = L.bottom
    zS = L.id_of(T.center(T.full()))
    for Q in L.subgroups_of(zS):
        Q = int(Q)
        if L.nodes[Q].order > L.nodes[best].order and is_central(F, Q):
            best = Q
    return best


# ---------------------------------------------------------------- focal / hyperfocal

def focal(F: FusionSystem) -> int:
    lab = F.element_classes()
    T = F.S.table
    first = {}
    gens = []
    for x in range(F.S.n):
        k = int(lab[x])
        if k not in first:
            first[k] = x
        else:
            gens.append(int(T.mul[T.inv[first[k]], x]))
    return F.L.id_of(T.closure(gens))


def hyperfocal(F: FusionSystem) -> int:
    T = F.S.table
    gens = set()
    for c in range(F.n_classes()):
        A = F.rep_aut(c)
        if p_part(A.order, F.p) == A.order:
            continue
        H = op_power_residual(A, F.p)
        if H.order == 1:
            continue
        R = F.class_rep(c)
        r = np.arange(len(F.elems[R]))
        for b in H.gens:
            b = np.asarray(b)
            for m in F.class_members(c):
                x = F.tau[m][r]
                y = F.tau[m][b[r]]
                gens.update(int(v) for v in T.mul[T.inv[x], y])
    return F.L.id_of(T.closure(sorted(gens)))


def opprime_aut(F: FusionSystem, node: int) -> PermGroup:
    return opprime_residual(F.aut(node), F.p)


def oppower_aut(F: FusionSystem, node: int) -> PermGroup:
    return op_power_residual(F.aut(node), F.p)


def commutator_subgroup(F: FusionSystem) -> int:
    T = F.S.table
    return F.L.id_of(T.commutator_subgroup(T.full(), T.full()))


def sylow_check(F: FusionSystem) -> bool:
    """``Aut_S(P)`` is Sylow in ``Aut_F(P)`` at every fully normalized ``P``."""
    for info in F.f_classes():
        for P in info.fully_normalized_reps:
            if F.aut_S(P).order != p_part(info.aut_order, F.p):
                return False
    return True


def centrad_check(F: FusionSystem, P: int) -> tuple[bool, bool]:
    """Both sides of the centric-radical criterion at a fully normalized ``P``.

    Returns ``(centric and radical, no g in N_S(P) - P induces an element of O_p(Aut_F(P)))``.
    """
    L = F.L
    T = F.S.table
    lhs = F.is_centric(P) and F.is_radical(P)
    Opc = op_core(F.aut(P), F.p)
    e = F.elems[P]
    rhs = True
    for g in L.elements(L.normalizer(P)):
        if L.nodes[P].mask[g]:
            continue
        cg = Perm(map(int, F.loc[P][T.conj[g, e]]))
        if Opc.contains(cg):
            rhs = False
            break
    return lhs, rhs


def mask_of_node(F: FusionSystem, node: int) -> np.ndarray:
    return F.L.nodes[node].mask


def node_key(F: FusionSystem, node: int) -> bytes:
    return mask_key(F.L.nodes[node].mask)


def sylow_of_group(G: PermGroup, p: int) -> PermGroup:
    return sylow_subgroup(G, p)
