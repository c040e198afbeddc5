"""Centric linking systems of finite groups and the maps from ``Out(G)``.

An automorphism of ``G`` normalizing ``S`` acts on the linking system.  When
it restricts to an element of ``Aut_F(S)`` it can be normalized to be the
identity on ``Aut_L(S)``; it then acts on each ``Aut_L(P)`` as conjugation by
some ``g_P`` in ``C_{Z(P)}(Aut_S(P))``, determined modulo
``C_{Z(P)}(Aut_F(P))``.  These elements decide whether its class in the
group of isotypical outer automorphisms is trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import CapacityError, InputError, InternalError
from .fusion import FusionSystem, fusion_from_group, normalizer_in_G
from .fusionops import fusion_preserving_auts
from .perm import Perm
from .permgrp import (PermGroup, automorphism_group, centralizer_search, op_power_residual,
                      p_part, transporter)

DEFAULT_MAX_AUT_BRUTEFORCE = 10_000


# ---------------------------------------------------------------- objects

def _node_group(F: FusionSystem, P: int) -> PermGroup:
    return F.L.perm_group(P)


def c_prime(F: FusionSystem, P: int) -> PermGroup:
    """``O^p(C_G(P))``."""
    key = ("cprime", P)
    if key not in F._ng_cache:
        gens = [F.S.perms[g] for g in F.L.nodes[P].generators]
        C = centralizer_search(F.G, gens)
        F._ng_cache[key] = op_power_residual(C, F.p)
    return F._ng_cache[key]


def is_quasicentric(G: PermGroup, P: PermGroup, p: int) -> bool:
    C = centralizer_search(G, P.gens)
    H = op_power_residual(C, p)
    return H.order % p != 0


@dataclass
class LinkingObject:
    node: int
    n_g_order: int
    c_g_order: int
    c_prime_order: int
    aut_order: int  # |Aut_L(P)| = |N_G(P)| / |C'_G(P)|


@dataclass
class LinkingSystem:
    F: FusionSystem
    objects: dict  # node -> LinkingObject
    selector: str

    def mor_count(self, P: int, Q: int) -> int:
        """``|Mor_L(P, Q)| = |N_G(P, Q)| / |C'_G(P)|``."""
        F = self.F
        T = transporter(F.G, _node_group(F, P), _node_group(F, Q))
        return len(T) // self.objects[P].c_prime_order

    def check(self, pairs: int | None = None) -> list:
        """Verify the counting axiom, surjectivity onto morphism sets and the Sylow property."""
        F = self.F
        bad = []
        nodes = sorted(self.objects)
        for P in nodes:
            ob = self.objects[P]
            if ob.c_prime_order % F.p == 0:
                bad.append(("not quasicentric", P))
            if F.is_fully_normalized(P):
                nS = F.L.nodes[F.L.normalizer(P)].order
                if nS != p_part(ob.aut_order, F.p):
                    bad.append(("sylow", P))
        done = 0
        for P in nodes:
            for Q in nodes:
                if F.L.nodes[Q].order < F.L.nodes[P].order:
                    continue
                if pairs is not None and done >= pairs:
                    return bad
                done += 1
                m = self.mor_count(P, Q)
                # C_G(P) = C_S(P) x C'_G(P) for quasicentric P, so Mor_L(P,Q)/C_S(P) is Hom_F(P,Q)
                cs = self.objects[P].c_g_order // self.objects[P].c_prime_order
                if m != cs * F.hom_count(P, Q):
                    bad.append(("count", P, Q))
        return bad


def build_linking(F: FusionSystem, objects: str = "centric", above: int | None = None) -> LinkingSystem:
    """Linking system on the centric subgroups.

    With ``objects="quasicentric-above"`` the objects are the quasicentric
    overgroups of ``above`` and of its F-conjugates.
    """
    if F.G is None:
        raise InputError("linking systems need a group-backed fusion system")
    L = F.L
    if objects == "centric":
        nodes = [P for info in F.f_classes() if info.centric for P in info.members]
    elif objects == "quasicentric-above":
        if above is None:
            raise InputError("quasicentric-above needs a subgroup")
        # overgroups of every F-conjugate, so the family is closed under F
        cands = set()
        for Q in F.class_members(F.class_of(above)):
            cands.update(int(P) for P in L.overgroups_of(Q))
        nodes = [P for P in sorted(cands) if c_prime(F, P).order % F.p != 0]
        _check_family(F, nodes)
    else:
        raise InputError(f"unknown object family {objects!r}")
    obs = {}
    for P in nodes:
        NG = normalizer_in_G(F, P)
        C = centralizer_search(F.G, [F.S.perms[g] for g in L.nodes[P].generators])
        Cp = c_prime(F, P)
        if Cp.order % F.p == 0:
            raise InputError(f"subgroup {P} is not quasicentric")
        obs[P] = LinkingObject(P, NG.order, C.order, Cp.order, NG.order // Cp.order)
    return LinkingSystem(F, obs, objects)


def _check_family(F: FusionSystem, nodes):
    s = set(nodes)
    for P in nodes:
        for Q in F.class_members(F.class_of(P)):
            if Q not in s:
                raise InputError("object family is not closed under F-conjugacy")
        for R in F.L.overgroups_of(P):
            if int(R) not in s:
                raise InputError("object family is not closed under overgroups")
    for info in F.f_classes():
        if info.centric and info.radical and not all(m in s for m in info.members):
            raise InputError("object family misses a centric radical subgroup")


# ---------------------------------------------------------------- centers

def _fixed(F: FusionSystem, mask: np.ndarray, gmaps) -> np.ndarray:
    m = mask.copy()
    for g in gmaps:
        xs = np.flatnonzero(m)
        m[xs[g[xs] != xs]] = False
    return m


def z_mask(F: FusionSystem, P: int) -> np.ndarray:
    return F.S.table.center(F.L.nodes[P].mask)


def cz_aut_S(F: FusionSystem, P: int) -> np.ndarray:
    """``C_{Z(P)}(Aut_S(P))``."""
    T = F.S.table
    gm = [T.conj[g] for g in F.L.nodes[F.L.normalizer(P)].generators]
    return _fixed(F, z_mask(F, P), gm)


def cz_aut_F(F: FusionSystem, P: int) -> np.ndarray:
    """``C_{Z(P)}(Aut_F(P))``."""
    return _fixed(F, z_mask(F, P), F.aut_gmaps(P))


def cz_aut_F_pair(F: FusionSystem, P: int, Q: int) -> np.ndarray:
    """``C_{Z(Q)}(Aut_F(P, Q))`` for ``Q <= P``."""
    c = F.class_of(P)
    qmask = F.L.nodes[Q].mask
    eq = F.elems[Q]
    gm = []
    for a in F.aut_elements(c):
        g = F.iso_gmap(P, P, a)
        if qmask[g[eq]].all():
            gm.append(g)
    return _fixed(F, z_mask(F, Q), gm)


def _is_elem_abelian(F: FusionSystem, E: int) -> bool:
    T = F.S.table
    m = F.L.nodes[E].mask
    xs = np.flatnonzero(m)
    return bool((T.element_orders()[xs] <= F.p).all() and T.center(m).sum() == m.sum())


def essential_zero(F: FusionSystem) -> list[int]:
    """Fully normalized essentials with ``C_{Z(P)}(Aut_F(P))`` strictly inside ``C_{Z(P)}(Aut_S(P))``."""
    out = []
    for P in F.essential_subgroups():
        if cz_aut_F(F, P).sum() < cz_aut_S(F, P).sum():
            out.append(P)
    return out


def essential_zero_hat(F: FusionSystem, E0: list[int] | None = None) -> list[int]:
    """Members of ``E0`` equal to ``C_S(E)`` for a fully centralized elementary abelian ``E``."""
    L = F.L
    T = F.S.table
    E0 = essential_zero(F) if E0 is None else E0
    elem_ab = None
    out = []
    for P in E0:
        zP = L.id_of(T.center(L.nodes[P].mask))
        found = False
        for E in L.subgroups_of(zP):
            E = int(E)
            if _is_elem_abelian(F, E) and L.centralizer(E) == P and F.is_fully_centralized(E):
                found = True
                break
        if not found:
            if elem_ab is None:
                elem_ab = [int(E) for E in range(len(L)) if _is_elem_abelian(F, E)]
            found = any(L.centralizer(E) == P and F.is_fully_centralized(E) for E in elem_ab)
        if found:
            out.append(P)
    return out


# ---------------------------------------------------------------- g_P data

def _coset_key(F: FusionSystem, x: int, sub: np.ndarray) -> int:
    """Least element of the coset ``x * sub`` (``sub`` a subgroup mask)."""
    T = F.S.table
    return int(T.mul[x, np.flatnonzero(sub)].min())


def g_element(F: FusionSystem, alpha, P: int) -> int:
    """``g_P`` for an automorphism ``alpha`` of ``G`` (callable on perms) trivial on ``S``.

    The least element of ``C_{Z(P)}(Aut_S(P))`` whose conjugation agrees with
    ``alpha`` on ``N_G(P)`` modulo ``O^p(C_G(P))``.
    """
    NG = normalizer_in_G(F, P)
    Cp = c_prime(F, P)
    cands = np.flatnonzero(cz_aut_S(F, P))
    for z in cands:
        zp = F.S.perms[int(z)]
        ok = True
        for m in NG.gens:
            a = alpha(m)
            b = zp * m * zp.inverse()
            if not Cp.contains(a * b.inverse()):
                ok = False
                break
        if ok:
            return int(z)
    raise InternalError(f"no g_P found at subgroup {P}")


def g_data(F: FusionSystem, alpha, nodes) -> dict:
    """``{P: g_P}`` after checking ``alpha`` is the identity on ``S``."""
    for g in F.L.nodes[F.L.top].generators:
        s = F.S.perms[g]
        if alpha(s) != s:
            raise InputError("automorphism is not the identity on S")
    return {P: g_element(F, alpha, P) for P in nodes}


def is_trivial_class(F: FusionSystem, gd: dict, nodes) -> bool:
    """Whether some ``g`` in ``C_{Z(S)}(Aut_F(S))`` has ``g_P`` in ``g C_{Z(P)}(Aut_F(P))`` for all ``P``."""
    T = F.S.table
    top = F.L.top
    shifts = np.flatnonzero(cz_aut_F(F, top))
    for g in shifts:
        ginv = T.inv[g]
        if all(cz_aut_F(F, P)[T.mul[ginv, gd[P]]] for P in nodes):
            return True
    return False


def kernel_upper_bound(F: FusionSystem, reps) -> int:
    """Number of admissible ``(g_P)`` tuples modulo the global shift."""
    T = F.S.table
    top = F.L.top
    vals = {}
    for P in reps:
        cs = cz_aut_S(F, P)
        cf = cz_aut_F(F, P)
        vals[P] = sorted({_coset_key(F, int(x), cf) for x in np.flatnonzero(cs)})
    cons = []
    for Q in reps:
        cons.append((top, Q, cz_aut_F_pair(F, top, Q)))
        for P in reps:
            if P != Q and F.L.is_sub(Q, P):
                cons.append((P, Q, cz_aut_F_pair(F, P, Q)))
    valid = set()
    for tup in product(*[vals[P] for P in reps]):
        g = dict(zip(reps, tup))
        g[top] = 0
        if all(m[T.mul[T.inv[g[Q]], g[P]]] for P, Q, m in cons):
            valid.add(tup)
    shifts = np.flatnonzero(cz_aut_F(F, top))
    seen = set()
    orbits = 0
    for tup in sorted(valid):
        if tup in seen:
            continue
        orbits += 1
        for s in shifts:
            seen.add(tuple(_coset_key(F, int(T.mul[s, x]), cz_aut_F(F, P)) for P, x in zip(reps, tup)))
    return orbits


# ---------------------------------------------------------------- Out(G) analysis

@dataclass
class KernelClass:
    out_class: int
    representative: dict  # generator -> image, cycle notation
    g_data: dict  # node -> element
    trivial: bool
    trivial_hat: bool


@dataclass
class MuKappaReport:
    out_G: int
    aut_G_S: int
    out_S_F: int
    restriction_image: int
    restriction_kernel: int
    kernel_classes: list = field(default_factory=list)
    E0: list = field(default_factory=list)
    E0_hat: list = field(default_factory=list)
    ker_kappa: int = 1
    ker_mu_lower: int = 1
    ker_mu_upper: int = 1
    kappa_injective: bool = True
    kappa_surjective: str = "unknown"
    mu_injective: str = "unknown"
    kappa: str = "unknown"
    exact_sequence: bool = True


def _as_callable(m: dict):
    return lambda x: m[Perm(x)]


def aut_group_data(G: PermGroup, cap: int = DEFAULT_MAX_AUT_BRUTEFORCE):
    if G.order > cap:
        raise CapacityError(f"|G| = {G.order} exceeds the automorphism brute-force cap {cap}")
    return automorphism_group(G, cap=cap)


def mu_kappa_report(G: PermGroup, p: int, sylow: PermGroup | None = None,
                    F: FusionSystem | None = None,
                    cap: int = DEFAULT_MAX_AUT_BRUTEFORCE) -> MuKappaReport:
    if F is None:
        F = fusion_from_group(G, p, sylow=sylow)
    S = F.L.perm_group(F.L.top)
    A = aut_group_data(G, cap)
    top = F.L.top
    NS = normalizer_in_G(F, top)
    autFS = {tuple(int(x) for x in r) for r in F.aut_elements(F.class_of(top))}
    fp = fusion_preserving_auts(F)
    # one S-normalizing representative per outer class, and the count of Aut(G,S)
    reps: dict = {}
    n_aut_gs = 0
    for k in range(A.order):
        m = A.full_map(k)
        if not all(S.contains(m[s]) for s in S.gens):
            continue
        n_aut_gs += 1
        reps.setdefault(A.out_class[k], m)
    out_G = A.out_order
    if len(reps) != out_G:
        raise InternalError("some outer class has no S-normalizing representative")
    # restriction to S modulo Aut_F(S)
    images = {}
    kernel = []
    for c, m in sorted(reps.items()):
        beta = np.array([F.S.index_of(m[F.S.perms[i]]) for i in range(F.S.n)], dtype=np.int64)
        key = min(tuple(int(beta[a[i]]) for i in F.L.nodes[top].generators) for a in autFS)
        images.setdefault(key, []).append(c)
        # beta in Aut_F(S) iff composition with the coset contains the identity
        if tuple(int(x) for x in beta) in autFS:
            kernel.append((c, m))
    rep = MuKappaReport(out_G, n_aut_gs, fp.out_order, len(images), len(kernel))
    E0 = essential_zero(F)
    E0h = essential_zero_hat(F, E0)
    rep.E0, rep.E0_hat = E0, E0h
    NS_elems = NS.element_list()
    ker_kappa = 0
    for c, m in kernel:
        # normalize to the identity on S, then on Aut_L(S)
        n = next(x for x in NS_elems if all(x * s * x.inverse() == m[s] for s in S.gens))
        ninv = n.inverse()
        a1 = lambda x, m=m, ninv=ninv, n=n: ninv * m[Perm(x)] * n
        gS = g_element(F, a1, top)
        zs = F.S.perms[gS]
        zinv = zs.inverse()
        alpha = lambda x, a1=a1, zs=zs, zinv=zinv: zinv * a1(x) * zs
        gd = g_data(F, alpha, E0)
        triv = is_trivial_class(F, gd, E0)
        triv_h = is_trivial_class(F, {P: gd[P] for P in E0h}, E0h)
        if triv != triv_h:
            raise InternalError("triviality tests over E0 and its subfamily disagree")
        if triv:
            ker_kappa += 1
        rep.kernel_classes.append(KernelClass(
            c, {str(g): str(alpha(g)) for g in G.gens},
            {P: str(F.S.perms[x]) for P, x in gd.items()}, triv, triv_h))
    rep.ker_kappa = ker_kappa
    rep.kappa_injective = ker_kappa == 1
    rep.ker_mu_lower = len(kernel) // ker_kappa
    classes_hat = _one_per_class(F, E0h)
    rep.ker_mu_upper = kernel_upper_bound(F, classes_hat)
    if rep.ker_mu_upper < rep.ker_mu_lower:
        raise InternalError("upper bound below realized kernel")
    im_kappa = out_G // ker_kappa
    upper_typ = rep.ker_mu_upper * rep.out_S_F
    if im_kappa >= upper_typ:
        rep.kappa_surjective = "yes"
    elif rep.ker_mu_lower == rep.ker_mu_upper and im_kappa < rep.ker_mu_lower * rep.out_S_F:
        rep.kappa_surjective = "no"
    else:
        rep.kappa_surjective = "ambiguous"
    if rep.ker_mu_upper == 1:
        rep.mu_injective = "yes"
    elif rep.ker_mu_lower > 1:
        rep.mu_injective = "no"
    else:
        rep.mu_injective = "ambiguous"
    if rep.kappa_injective and rep.kappa_surjective == "yes":
        rep.kappa = "isomorphism"
    elif rep.kappa_surjective == "ambiguous":
        rep.kappa = "ambiguous"
    elif rep.kappa_injective:
        rep.kappa = "injective"
    elif rep.kappa_surjective == "yes":
        rep.kappa = "surjective"
    else:
        rep.kappa = "neither"
    rep.exact_sequence = out_G * NS.order == n_aut_gs * _center_order(G)
    return rep


def _one_per_class(F: FusionSystem, nodes) -> list:
    seen = {}
    for P in sorted(nodes):
        seen.setdefault(F.class_of(P), P)
    return sorted(seen.values())


def _center_order(G: PermGroup) -> int:
    return centralizer_search(G, G.gens).order


def outer_exact_sequence_check(G: PermGroup, p: int, sylow: PermGroup | None = None,
                               cap: int = DEFAULT_MAX_AUT_BRUTEFORCE) -> bool:
    """``|Out(G)| |N_G(S)| = |Aut(G,S)| |Z(G)|``."""
    F = fusion_from_group(G, p, sylow=sylow)
    S = F.L.perm_group(F.L.top)
    A = aut_group_data(G, cap)
    n = 0
    for k in range(A.order):
        m = A.full_map(k)
        if all(S.contains(m[s]) for s in S.gens):
            n += 1
    return A.out_order * normalizer_in_G(F, F.L.top).order == n * _center_order(G)


def kernel_element_data(F: FusionSystem, alpha) -> dict:
    """``g_P`` over ``E0`` for an automorphism already trivial on ``S`` and ``Aut_L(S)``."""
    E0 = essential_zero(F)
    gS = g_element(F, alpha, F.L.top)
    if not cz_aut_F(F, F.L.top)[gS]:
        raise InputError("automorphism is not the identity on Aut_L(S)")
    return g_data(F, alpha, E0)
