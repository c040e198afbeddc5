"""Operations producing or comparing fusion systems: restrictions, normalizer
subsystems, quotients, products, isomorphisms and normal subsystems."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import CapacityError, InputError, InternalError
from .fusion import (FusionSystem, fusion_from_group, generated_system,
                     is_strongly_closed)
from .perm import Perm
from .permgrp import (PermGroup, constrained_subgroup, direct_product,
                      normalizer_search, quotient_group)
from .plattice import Lattice, PGroup, build_lattice


# ---------------------------------------------------------------- embeddings

class Embedding:
    """Inclusion of the lattice of a subgroup ``S0 <= S`` into that of ``S``."""

    def __init__(self, L0: Lattice, L: Lattice, emb: np.ndarray):
        self.L0 = L0
        self.L = L
        self.emb = np.asarray(emb, dtype=np.int64)
        self.back = np.full(L.S.n, -1, dtype=np.int64)
        self.back[self.emb] = np.arange(len(self.emb))

    def node_up(self, i0: int) -> int:
        m = np.zeros(self.L.S.n, dtype=bool)
        m[self.emb[self.L0.elements(i0)]] = True
        return self.L.id_of(m)

    def node_down(self, i: int) -> int:
        e = self.back[self.L.elements(i)]
        if (e < 0).any():
            raise InputError("subgroup not inside S0")
        m = np.zeros(self.L0.S.n, dtype=bool)
        m[e] = True
        return self.L0.id_of(m)

    def gmap_up(self, g0: np.ndarray) -> np.ndarray:
        g = np.full(self.L.S.n, -1, dtype=np.int64)
        dom = np.flatnonzero(g0 >= 0)
        g[self.emb[dom]] = self.emb[g0[dom]]
        return g

    def gmap_down(self, g: np.ndarray) -> np.ndarray:
        g0 = np.full(self.L0.S.n, -1, dtype=np.int64)
        img = g[self.emb]
        ok = img >= 0
        g0[ok] = self.back[img[ok]]
        if (g0[ok] < 0).any():
            raise InputError("map leaves S0")
        return g0


def embed_by_perms(L0: Lattice, L: Lattice, offset: int = 0) -> Embedding:
    """Embedding determined by the permutations: ``S0`` acts on points ``offset..``."""
    n = L.S.degree
    r0 = L0.S.rows
    if offset + r0.shape[1] > n:
        raise InputError("degrees do not fit")
    rows = np.tile(np.arange(n, dtype=np.int64), (len(r0), 1))
    rows[:, offset:offset + r0.shape[1]] = r0 + offset
    emb = L.S.index.lookup(rows)
    if (emb < 0).any():
        raise InputError("group is not contained in S")
    return Embedding(L0, L, emb)


def inverse_embedding(E: Embedding) -> Embedding:
    if len(E.emb) != E.L.S.n:
        raise InputError("embedding is not onto")
    return Embedding(E.L, E.L0, E.back)


def sub_lattice(L: Lattice, node: int) -> Embedding:
    S0 = PGroup(L.perm_group(node), L.p, max_order=max(L.S.n, 2))
    L0 = build_lattice(S0)
    emb = L.S.index.lookup(S0.rows)
    return Embedding(L0, L, emb)


def system_generators(F: FusionSystem) -> list:
    """``(node, gmap)`` pairs generating ``F``: class isomorphisms and automorphisms."""
    out = []
    for c in range(F.n_classes()):
        R = F.class_rep(c)
        for a in F.rep_aut(c).gens:
            out.append((R, F.gmap_of_local(R, a)))
        ident = np.arange(len(F.elems[R]))
        for m in F.class_members(c):
            if m != R:
                out.append((R, F.iso_gmap(R, m, ident)))
    return out


def contains_generators(F: FusionSystem, gens) -> bool:
    return all(F.contains_map(node, g) for node, g in gens)


def same_system(F1: FusionSystem, F2: FusionSystem) -> bool:
    """Equality of morphism sets for two systems over the same lattice."""
    if F1.L is not F2.L and not np.array_equal(F1.S.rows, F2.S.rows):
        return False
    if F1.n_classes() != F2.n_classes():
        return False
    return contains_generators(F2, system_generators(F1)) and contains_generators(F1, system_generators(F2))


def equal_under(Fa: FusionSystem, Fb: FusionSystem, E: Embedding) -> bool:
    """Equal morphism sets after identifying ``Sa`` with ``Sb`` through ``E``."""
    if len(E.emb) != Fb.S.n:
        return False
    return is_subsystem(Fa, Fb, E) and is_subsystem(Fb, Fa, inverse_embedding(E))


def is_subsystem(F0: FusionSystem, F: FusionSystem, E: Embedding | None = None) -> bool:
    gens = system_generators(F0)
    if E is None:
        return contains_generators(F, gens)
    return all(F.contains_map(E.node_up(n0), E.gmap_up(g0)) for n0, g0 in gens)


# ---------------------------------------------------------------- restriction

def restriction_generators(F: FusionSystem, node: int) -> list:
    """Generators of the full subsystem of ``F`` on the subgroups of ``node``."""
    L = F.L
    inside = set(int(i) for i in L.subgroups_of(node))
    out = []
    for c in range(F.n_classes()):
        mem = [m for m in F.class_members(c) if m in inside]
        if not mem:
            continue
        b = mem[0]
        for g in F.aut_gmaps(b):
            out.append((b, g))
        R = F.class_rep(c)
        ident = np.arange(len(F.elems[R]))
        tb = F.iso_gmap(b, R, ident)  # b -> R
        for m in mem[1:]:
            tm = F.iso_gmap(R, m, ident)
            g = np.full(F.S.n, -1, dtype=np.int64)
            eb = F.elems[b]
            g[eb] = tm[tb[eb]]
            out.append((b, g))
    return out


def restrict_system(F: FusionSystem, node: int, name: str = "") -> tuple[FusionSystem, Embedding]:
    """The full subsystem of ``F`` on subgroups of ``node``, as a system over it."""
    E = sub_lattice(F.L, node)
    gens = [(E.node_down(n), E.gmap_down(g)) for n, g in restriction_generators(F, node)]
    return generated_system(E.L0, gens, name=name), E


# ---------------------------------------------------------------- normalizer subsystems

def _restrict_to_q(F: FusionSystem, X: int, Q: int, a_local) -> tuple | None:
    """Restriction of a local automorphism of ``X`` to ``Q`` as a local perm of ``Q``, if ``Q`` is invariant."""
    e = F.elems[X]
    img = e[np.asarray(a_local, dtype=np.int64)]
    gm = np.full(F.S.n, -1, dtype=np.int64)
    gm[e] = img
    q = F.elems[Q]
    iq = gm[q]
    loc = F.loc[Q][iq]
    if (loc < 0).any():
        return None
    return tuple(int(x) for x in loc)


def n_s_k(F: FusionSystem, Q: int, K: PermGroup | None, phi=None, Qstar: int | None = None) -> np.ndarray:
    """Mask of ``N_S^{K*}(Q*)`` with ``K* = phi K phi^-1`` (``phi: Q -> Q*`` as a gmap)."""
    L = F.L
    T = F.S.table
    Qs = Q if Qstar is None else Qstar
    N = L.elements(L.normalizer(Qs))
    if K is None:
        m = np.zeros(F.S.n, dtype=bool)
        m[N] = True
        return m
    q = F.elems[Q]
    if phi is None:
        phi = np.full(F.S.n, -1, dtype=np.int64)
        phi[q] = q
    inv = np.full(F.S.n, -1, dtype=np.int64)
    inv[phi[q]] = q
    keep = []
    for g in N:
        # phi^-1 c_g phi on Q, local
        loc = F.loc[Q][inv[T.conj[g, phi[q]]]]
        if K.contains(Perm(map(int, loc))):
            keep.append(int(g))
    m = np.zeros(F.S.n, dtype=bool)
    m[keep] = True
    return m


def is_fully_k_normalized(F: FusionSystem, Q: int, K: PermGroup | None):
    """``(ok, witness)``; the witness is a better conjugate when not ok."""
    base = int(n_s_k(F, Q, K).sum())
    c = F.class_of(Q)
    for m in F.class_members(c):
        if K is None:
            size = F.L.nodes[F.L.normalizer(m)].order
            if size > base:
                return False, m
            continue
        for a in F.aut_elements(c):
            phi = F.iso_gmap(Q, m, a)
            size = int(n_s_k(F, Q, K, phi, m).sum())
            if size > base:
                return False, m
    return True, None


def normalizer_subsystem(F: FusionSystem, Q: int, K: PermGroup | None = None,
                         name: str = "") -> tuple[FusionSystem, Embedding]:
    """``N_F^K(Q)`` over ``N_S^K(Q)``; ``K=None`` means all of ``Aut(Q)``."""
    ok, wit = is_fully_k_normalized(F, Q, K)
    if not ok:
        raise InputError(f"subgroup is not fully K-normalized; conjugate {wit} does better")
    L = F.L
    NK = L.id_of(n_s_k(F, Q, K))
    NQ = L.normalizer(Q)
    objs = [int(X) for X in L.overgroups_of(Q) if L.is_sub(int(X), NQ)]

    def good(X, Xp, gm):
        q = F.elems[Q]
        if not F.L.nodes[Q].mask[gm[q]].all():
            return False
        if K is None:
            return True
        return K.contains(Perm(map(int, F.loc[Q][gm[q]])))

    gens = []
    # vertex groups
    for X in objs:
        c = F.class_of(X)
        for a in F.aut_elements(c):
            gm = F.iso_gmap(X, X, a)
            if good(X, X, gm):
                gens.append((X, gm))
    # one connecting isomorphism per reachable object
    by_class: dict = {}
    for X in objs:
        by_class.setdefault(F.class_of(X), []).append(X)
    for c, xs in by_class.items():
        roots = []
        for X in xs:
            linked = False
            for r in roots:
                for a in F.aut_elements(c):
                    gm = F.iso_gmap(r, X, a)
                    if good(r, X, gm):
                        gens.append((r, gm))
                        linked = True
                        break
                if linked:
                    break
            if not linked:
                roots.append(X)
    # restrict to X meet N_S^K(Q)
    nk_mask = L.nodes[NK].mask
    restricted = []
    seen = set()
    for X, gm in gens:
        P = L.id_of(L.nodes[X].mask & nk_mask)
        g = np.full(F.S.n, -1, dtype=np.int64)
        e = F.elems[P]
        g[e] = gm[e]
        key = (P, g[e].tobytes())
        if key not in seen:
            seen.add(key)
            restricted.append((P, g))
    E = sub_lattice(L, NK)
    gens0 = [(E.node_down(P), E.gmap_down(g)) for P, g in restricted]
    return generated_system(E.L0, gens0, name=name), E


def centralizer_subsystem(F: FusionSystem, Q: int, name: str = ""):
    return normalizer_subsystem(F, Q, PermGroup(len(F.elems[Q]), []), name=name)


def group_normalizer_k(F: FusionSystem, Q: int, K: PermGroup | None) -> PermGroup:
    """``N_G^K(Q)`` for a group-backed system."""
    from .fusion import normalizer_in_G

    NG = normalizer_in_G(F, Q)
    if K is None:
        return NG
    q = F.elems[Q]
    rows = F.S.rows[q]
    xs = [F.S.perms[g] for g in F.L.nodes[Q].generators]
    idx = F.S.index

    def allowed(g):
        img = idx.lookup(np.asarray([tuple(g.conj(F.S.perms[int(x)])) for x in q]))
        if (img < 0).any():
            return False
        loc = F.loc[Q][img]
        return bool((loc >= 0).all()) and K.contains(Perm(map(int, loc)))

    from .permgrp import _image_candidates

    return constrained_subgroup(NG, xs, _image_candidates(xs, rows), allowed)


def group_normalizer_system(F: FusionSystem, Q: int, K: PermGroup | None, name: str = ""):
    """``F`` of ``N_G^K(Q)`` over ``N_S^K(Q)`` (requires ``Q`` fully K-normalized)."""
    NGK = group_normalizer_k(F, Q, K)
    NK = F.L.id_of(n_s_k(F, Q, K))
    Ssub = F.L.perm_group(NK)
    return fusion_from_group(NGK, F.p, sylow=Ssub, name=name)


# ---------------------------------------------------------------- quotients

@dataclass
class QuotientData:
    system: FusionSystem
    proj: np.ndarray  # element of S -> element of S/Q
    Q: int
    node_map: dict  # node P >= Q of F -> node P/Q


def quotient_system(F: FusionSystem, Q: int, name: str = "") -> QuotientData:
    """``F/Q`` for strongly closed ``Q``."""
    if not is_strongly_closed(F, Q):
        raise InputError("quotient requires a strongly closed subgroup")
    L = F.L
    S_perm = L.perm_group(L.top)
    Q_perm = L.perm_group(Q)
    qt = quotient_group(S_perm, Q_perm)
    Sbar = PGroup(qt.group, F.p, max_order=max(F.S.n, 2))
    Lbar = build_lattice(Sbar)
    proj = np.array([Sbar.index_of(qt.project(F.S.perms[x])) for x in range(F.S.n)], dtype=np.int64)
    node_map = {}
    for P in L.overgroups_of(Q):
        P = int(P)
        m = np.zeros(Sbar.n, dtype=bool)
        m[proj[F.elems[P]]] = True
        node_map[P] = Lbar.id_of(m)
    gens = []
    for P, g in system_generators(F):
        if P not in node_map:
            continue
        gb = np.full(Sbar.n, -1, dtype=np.int64)
        e = F.elems[P]
        gb[proj[e]] = proj[g[e]]
        gens.append((node_map[P], gb))
    Fq = generated_system(Lbar, gens, name=name)
    return QuotientData(Fq, proj, Q, node_map)


def fully_normalized_correspondence(F: FusionSystem, qd: QuotientData) -> list:
    """Nodes ``P >= Q`` where full normalization differs between ``P`` and ``P/Q``."""
    bad = []
    for P, Pb in qd.node_map.items():
        if F.is_fully_normalized(P) != qd.system.is_fully_normalized(Pb):
            bad.append(P)
    return bad


# ---------------------------------------------------------------- products

@dataclass
class ProductData:
    system: FusionSystem
    pair: np.ndarray  # pair[i1, i2] = element (s1, s2)
    factors: tuple
    nodes: tuple  # node of S1 x 1 and 1 x S2


def product_system(F1: FusionSystem, F2: FusionSystem, name: str = "") -> ProductData:
    if F1.p != F2.p:
        raise InputError("product of systems at different primes")
    G1 = F1.L.perm_group(F1.L.top)
    G2 = F2.L.perm_group(F2.L.top)
    d1 = G1.degree
    P = direct_product(G1, G2)
    Sx = PGroup(P, F1.p, max_order=max(F1.S.n * F2.S.n, 2))
    Lx = build_lattice(Sx)
    r1 = F1.S.rows
    r2 = F2.S.rows + d1
    n1, n2 = len(r1), len(r2)
    rows = np.concatenate([np.repeat(r1, n2, axis=0), np.tile(r2, (n1, 1))], axis=1)
    pair = Sx.index.lookup(rows).reshape(n1, n2)
    all2 = np.arange(n2)
    all1 = np.arange(n1)
    gens = []
    for X, g in system_generators(F1):
        e = F1.elems[X]
        m = np.zeros(Sx.n, dtype=bool)
        m[pair[np.ix_(e, all2)].ravel()] = True
        gx = np.full(Sx.n, -1, dtype=np.int64)
        gx[pair[np.ix_(e, all2)].ravel()] = pair[np.ix_(g[e], all2)].ravel()
        gens.append((Lx.id_of(m), gx))
    for X, g in system_generators(F2):
        e = F2.elems[X]
        m = np.zeros(Sx.n, dtype=bool)
        m[pair[np.ix_(all1, e)].ravel()] = True
        gx = np.full(Sx.n, -1, dtype=np.int64)
        gx[pair[np.ix_(all1, e)].ravel()] = pair[np.ix_(all1, g[e])].ravel()
        gens.append((Lx.id_of(m), gx))
    Fx = generated_system(Lx, gens, name=name)
    m1 = np.zeros(Sx.n, dtype=bool)
    m1[pair[:, 0]] = True
    m2 = np.zeros(Sx.n, dtype=bool)
    m2[pair[0, :]] = True
    return ProductData(Fx, pair, (F1, F2), (Lx.id_of(m1), Lx.id_of(m2)))


def product_node(pd: ProductData, P1: int, P2: int) -> int:
    F1, F2 = pd.factors
    m = np.zeros(pd.system.S.n, dtype=bool)
    m[pd.pair[np.ix_(F1.elems[P1], F2.elems[P2])].ravel()] = True
    return pd.system.L.id_of(m)


def internal_product_generators(F: FusionSystem, factors, systems) -> list:
    """Generators of ``F_1 x ... x F_m`` inside ``S`` for an internal direct product."""
    L = F.L
    T = F.S.table
    n = F.S.n
    # decompose each element of S as a product of factor components
    comps = [F.elems[f] for f in factors]
    coord = np.zeros((n, len(factors)), dtype=np.int64)
    # running products over all coordinate tuples, in meshgrid order
    full = comps[0]
    for k in range(1, len(comps)):
        full = T.mul[full[:, None], comps[k][None, :]].ravel()
    if len(np.unique(full)) != n:
        raise InputError("factors do not form a direct product")
    tuples = np.array(np.meshgrid(*comps, indexing="ij")).reshape(len(comps), -1).T
    coord[full] = tuples
    gens = []
    for k, (Fk, Ek) in enumerate(systems):
        for Xk, gk in system_generators(Fk):
            X_up = Ek.node_up(Xk)
            g_up = Ek.gmap_up(gk)
            # X_up times the other factors
            dom = F.L.nodes[X_up].mask[coord[:, k]]
            els = np.flatnonzero(dom)
            newc = coord[els].copy()
            newc[:, k] = g_up[newc[:, k]]
            img = _multiply_coords(T, newc)
            g = np.full(n, -1, dtype=np.int64)
            g[els] = img
            m = np.zeros(n, dtype=bool)
            m[els] = True
            gens.append((L.id_of(m), g))
    return gens


def _multiply_coords(T, coords: np.ndarray) -> np.ndarray:
    out = coords[:, 0].copy()
    for k in range(1, coords.shape[1]):
        out = T.mul[out, coords[:, k]]
    return out


# ---------------------------------------------------------------- isomorphism

def table_isomorphisms(T1, T2, lab1=None, lab2=None, limit: int = 10**6):
    """Iterate over isomorphisms between two table groups as index arrays."""
    if T1.n != T2.n:
        return
    from .plattice import generators_of

    gens = generators_of(T1, T1.full())
    o1, o2 = T1.element_orders(), T2.element_orders()
    c1, c2 = _class_sizes(T1), _class_sizes(T2)
    inv1 = (o1, c1) if lab1 is None else (o1, c1, lab1)
    inv2 = (o2, c2) if lab2 is None else (o2, c2, lab2)
    cands = []
    for g in gens:
        ok = np.ones(T2.n, dtype=bool)
        for a, b in zip(inv1, inv2):
            ok &= b == a[g]
        cands.append(np.flatnonzero(ok))
    count = [0]
    gens_arr = np.array(gens, dtype=np.int64)

    def walk(k, chosen):
        if k == len(gens):
            phi = K.extend_hom(T1.mul, gens_arr, T2.mul, np.array(chosen, dtype=np.int64))
            if phi is not None and (phi >= 0).all() and len(np.unique(phi)) == T1.n:
                count[0] += 1
                if count[0] > limit:
                    raise CapacityError("too many isomorphisms")
                yield phi
            return
        for c in cands[k]:
            # orders of pairwise products must match
            ok = True
            for j in range(k):
                if o1[T1.mul[gens[j], gens[k]]] != o2[T2.mul[chosen[j], c]]:
                    ok = False
                    break
            if ok:
                yield from walk(k + 1, chosen + [int(c)])

    if T1.n == 1:
        yield np.zeros(1, dtype=np.int64)
        return
    yield from walk(0, [])


def _class_sizes(T) -> np.ndarray:
    conj = T.conj
    return np.array([len(np.unique(conj[:, x])) for x in range(T.n)])


def _group_isomorphisms(S1: PGroup, S2: PGroup, lab1=None, lab2=None, limit: int = 10**6):
    yield from table_isomorphisms(S1.table, S2.table, lab1, lab2, limit)


def node_table(L: Lattice, node: int):
    """Multiplication table of a subgroup on the local indices of its sorted elements."""
    from .tablegroup import TableGroup

    e = L.elements(node)
    loc = np.full(L.S.n, -1, dtype=np.int64)
    loc[e] = np.arange(len(e))
    return TableGroup(loc[L.S.table.mul[np.ix_(e, e)]])


def _label_sizes(F: FusionSystem) -> np.ndarray:
    lab = F.element_classes()
    sizes = np.bincount(lab)
    return sizes[lab]


def transports(F1: FusionSystem, F2: FusionSystem, beta: np.ndarray) -> bool:
    """Whether ``beta: S1 -> S2`` carries ``F1`` onto ``F2``."""
    L2 = F2.L
    if F1.n_classes() != F2.n_classes():
        return False
    n2 = F2.S.n

    def image_node(P):
        m = np.zeros(n2, dtype=bool)
        m[beta[F1.elems[P]]] = True
        return L2.id_of(m)

    def conj_map(P, g):
        out = np.full(n2, -1, dtype=np.int64)
        e = F1.elems[P]
        out[beta[e]] = beta[g[e]]
        return out

    for c in range(F1.n_classes()):
        mem = F1.class_members(c)
        imgs = [image_node(m) for m in mem]
        c2 = F2.class_of(imgs[0])
        if any(F2.class_of(i) != c2 for i in imgs) or len(F2.class_members(c2)) != len(mem):
            return False
        R = F1.class_rep(c)
        if F1.rep_aut(c).order != F2.rep_aut(c2).order:
            return False
        bR = image_node(R)
        for a in F1.rep_aut(c).gens:
            if not F2.contains_map(bR, conj_map(R, F1.gmap_of_local(R, a))):
                return False
        ident = np.arange(len(F1.elems[R]))
        for m in mem:
            if m != R and not F2.contains_map(bR, conj_map(R, F1.iso_gmap(R, m, ident))):
                return False
    return True


def is_isomorphic(F1: FusionSystem, F2: FusionSystem):
    """A fusion-preserving isomorphism ``S1 -> S2`` as an index array, or ``None``."""
    if F1.p != F2.p or F1.S.n != F2.S.n:
        return None
    if F1.fingerprint() != F2.fingerprint():
        return None
    for beta in _group_isomorphisms(F1.S, F2.S, _label_sizes(F1), _label_sizes(F2)):
        if transports(F1, F2, beta):
            return beta
    return None


def iso_witness_perms(F1: FusionSystem, F2: FusionSystem, beta) -> dict:
    """Images of the generators of ``S1`` under ``beta``, in cycle notation."""
    gens = F1.L.nodes[F1.L.top].generators
    return {str(F1.S.perms[g]): str(F2.S.perms[int(beta[g])]) for g in gens}


@dataclass
class FusionPreservingAuts:
    order: int  # |Aut(S, F)|
    aut_F_S_order: int
    out_order: int
    auts: list  # index arrays
    aut_S_order: int


def fusion_preserving_auts(F: FusionSystem) -> FusionPreservingAuts:
    """``Aut(S,F)`` by checking every automorphism of ``S``."""
    auts = []
    total = 0
    sizes = _label_sizes(F)
    for beta in _group_isomorphisms(F.S, F.S, sizes, sizes, limit=10**7):
        total += 1
        if transports(F, F, beta):
            auts.append(beta)
    aFS = F.aut_order(F.L.top)
    if len(auts) % aFS:
        raise InternalError("Aut_F(S) does not divide Aut(S,F); inconsistent system")
    return FusionPreservingAuts(len(auts), aFS, len(auts) // aFS, auts, total)


# ---------------------------------------------------------------- normal subsystems

def is_normal_subsystem(F0: FusionSystem, F: FusionSystem, E: Embedding | None = None) -> bool:
    """Strong closure of ``S0``, the Frattini-type factorization and ``Aut_F(S0)``-invariance."""
    if E is None:
        if F0.S.n != F.S.n:
            raise InputError("embedding required for a subsystem on a proper subgroup")
        E = Embedding(F0.L, F.L, np.arange(F.S.n))
    S0 = E.node_up(F0.L.top)
    if not is_strongly_closed(F, S0):
        return False
    if not is_subsystem(F0, F, E):
        return False
    autS0 = [g for g in F.aut_gmaps(S0)]
    # (iii) invariance: alpha psi alpha^-1 in F0 for generators
    gens0 = system_generators(F0)
    for a in autS0:
        ainv = np.full(F.S.n, -1, dtype=np.int64)
        e = F.elems[S0]
        ainv[a[e]] = e
        for n0, g0 in gens0:
            X = E.node_up(n0)
            g = E.gmap_up(g0)
            eX = F.elems[X]
            h = np.full(F.S.n, -1, dtype=np.int64)
            h[a[eX]] = a[g[eX]]
            m = np.zeros(F.S.n, dtype=bool)
            m[a[eX]] = True
            aX = F.L.id_of(m)
            if not F0.contains_map(E.node_down(aX), E.gmap_down(h)):
                return False
    # (ii) every generator of F on subgroups of S0 factors as phi0 o alpha
    A = F.aut(S0)
    alphas = [F.gmap_of_local(S0, r) for r in A.elements()]
    for X, g in restriction_generators(F, S0):
        eX = F.elems[X]
        found = False
        for a in alphas:
            m = np.zeros(F.S.n, dtype=bool)
            m[a[eX]] = True
            aX = F.L.id_of(m)
            h = np.full(F.S.n, -1, dtype=np.int64)
            h[a[eX]] = g[eX]
            if F0.contains_map(E.node_down(aX), E.gmap_down(h)):
                found = True
                break
        if not found:
            return False
    return True


def group_system_of_subgroup(F: FusionSystem, H: PermGroup, name: str = ""):
    """``F_{S cap H}(H)`` when ``S cap H`` is Sylow in ``H`` (used for cross-checks)."""
    T = F.S.table
    keep = [i for i in range(F.S.n) if H.contains(F.S.perms[i])]
    node = F.L.id_of(T.closure(keep))
    Ssub = F.L.perm_group(node)
    return fusion_from_group(H, F.p, sylow=Ssub, name=name), node


def normalizer_search_for(F: FusionSystem, node: int) -> PermGroup:
    e = F.elems[node]
    return normalizer_search(F.G, [F.S.perms[g] for g in F.L.nodes[node].generators], F.S.rows[e])
