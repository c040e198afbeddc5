"""Permutation groups: stabilizer chains, backtrack searches and derived subgroups."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import prod

import numpy as np

from . import _kernels as K
from .errors import CapacityError, InputError, InternalError
from .perm import Perm

DEFAULT_ENUM_CAP = 2_000_000
DEFAULT_AUT_CAP = 10_000


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def _orbit_transversal(point: int, gens, n: int) -> dict:
    trans = {point: Perm.identity(n)}
    queue = [point]
    for x in queue:
        u = trans[x]
        for g in gens:
            y = g[x]
            if y not in trans:
                trans[y] = g * u
                queue.append(y)
    return trans


def orbit(point: int, gens) -> set:
    seen = {point}
    queue = [point]
    for x in queue:
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def _first_moved(g, order):
    for b in order:
        if g[b] != b:
            return b
    return None


class StabChain:
    """Base, strong generators per level, and explicit transversals."""

    def __init__(self, degree: int, base, level_gens, trans=None):
        self.degree = degree
        self.base = list(base)
        self.level_gens = [list(gs) for gs in level_gens]
        if trans is None:
            trans = [_orbit_transversal(b, gs, degree) for b, gs in zip(self.base, self.level_gens)]
        self.trans = trans
        self.tinv = [{c: u.inverse() for c, u in t.items()} for t in trans]
        self._sorted = [sorted(t) for t in trans]

    def order(self) -> int:
        return prod(len(t) for t in self.trans)

    def sorted_orbit(self, level: int):
        return self._sorted[level]

    def sift(self, g: Perm, start: int = 0):
        for lv in range(start, len(self.base)):
            c = g[self.base[lv]]
            t = self.tinv[lv]
            if c not in t:
                return g, lv
            g = t[c] * g
        return g, len(self.base)

    def contains(self, g: Perm) -> bool:
        h, _ = self.sift(g)
        return h.is_identity()

    def random_element(self, rng: random.Random) -> Perm:
        g = Perm.identity(self.degree)
        for lv in range(len(self.base)):
            pts = self._sorted[lv]
            g = g * self.trans[lv][pts[rng.randrange(len(pts))]]
        return g

    def elements(self) -> np.ndarray:
        """All group elements as an ``(order, degree)`` integer array."""
        n = self.degree
        elems = np.arange(n, dtype=np.int64)[None, :]
        for lv in reversed(range(len(self.base))):
            us = np.array([self.trans[lv][c] for c in self._sorted[lv]], dtype=np.int64)
            elems = us[:, elems].reshape(-1, n)
        return elems

    def strong_generators(self):
        seen = {}
        for gs in self.level_gens:
            for g in gs:
                seen.setdefault(g, None)
        return list(seen)


def _schreier_sims(n: int, gens, base_prefix=()) -> StabChain:
    """Deterministic Schreier-Sims."""
    gens = [g for g in dict.fromkeys(gens) if not g.is_identity()]
    base = list(dict.fromkeys(base_prefix))
    pref = base + [i for i in range(n) if i not in set(base)]
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(_first_moved(g, pref))
    level_gens = [[s for s in gens if all(s[b] == b for b in base[:i])] for i in range(len(base))]
    trans = [_orbit_transversal(base[i], level_gens[i], n) for i in range(len(base))]
    tinv = [{c: u.inverse() for c, u in t.items()} for t in trans]

    def sift(g, start):
        for lv in range(start, len(base)):
            c = g[base[lv]]
            if c not in tinv[lv]:
                return g, lv
            g = tinv[lv][c] * g
        return g, len(base)

    i = len(base) - 1
    while i >= 0:
        restart = False
        for beta, u in list(trans[i].items()):
            for s in level_gens[i]:
                sg = tinv[i][s[beta]] * (s * u)
                h, j = sift(sg, i + 1)
                if h.is_identity():
                    continue
                if j == len(base):
                    base.append(_first_moved(h, pref))
                    level_gens.append([])
                    trans.append(None)
                    tinv.append(None)
                for lv in range(0, j + 1):
                    level_gens[lv].append(h)
                for lv in range(i + 1, j + 1):
                    trans[lv] = _orbit_transversal(base[lv], level_gens[lv], n)
                    tinv[lv] = {c: w.inverse() for c, w in trans[lv].items()}
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return StabChain(n, base, level_gens, trans)


def _chain_with_known_order(n, order, source, base_prefix, seed_gens, rng) -> StabChain:
    """Random Schreier-Sims for a group of known order; exact once the order is reached."""
    base = list(dict.fromkeys(base_prefix))
    pref = base + [i for i in range(n) if i not in set(base)]
    level_gens = [[] for _ in base]
    trans = [{b: Perm.identity(n)} for b in base]
    tinv = [{b: Perm.identity(n)} for b in base]

    def sift(g):
        for lv in range(len(base)):
            c = g[base[lv]]
            if c not in tinv[lv]:
                return g, lv
            g = tinv[lv][c] * g
        return g, len(base)

    def current():
        return prod(len(t) for t in trans)

    stream = iter(seed_gens)
    attempts = 0
    while current() < order:
        g = next(stream, None)
        if g is None:
            g = source(rng)
        attempts += 1
        if attempts > 100_000:
            raise InternalError("random Schreier-Sims failed to reach the known order")
        h, j = sift(g)
        if h.is_identity():
            continue
        if j == len(base):
            base.append(_first_moved(h, pref))
            level_gens.append([])
            trans.append(None)
            tinv.append(None)
        for lv in range(j + 1):
            level_gens[lv].append(h)
            trans[lv] = _orbit_transversal(base[lv], level_gens[lv], n)
            tinv[lv] = {c: w.inverse() for c, w in trans[lv].items()}
    if current() != order:
        raise InternalError("chain order overshoot")
    return StabChain(n, base, level_gens, trans)


class PermGroup:
    """A finite permutation group on {0, ..., degree-1}."""

    def __init__(self, degree: int, gens=(), *, chain: StabChain | None = None):
        self.degree = int(degree)
        gl = []
        for g in gens:
            g = g if isinstance(g, Perm) else Perm(g)
            if len(g) != self.degree:
                raise InputError(f"generator {g} has degree {len(g)}, expected {self.degree}")
            if sorted(g) != list(range(self.degree)):
                raise InputError(f"generator {tuple(g)} is not a bijection")
            if not g.is_identity():
                gl.append(g)
        self.gens = list(dict.fromkeys(gl))
        self._chain = chain
        self._chains: dict = {}
        self._elements = None
        self._elem_set = None

    # -- basic data
    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = _schreier_sims(self.degree, self.gens)
        return self._chain

    @property
    def order(self) -> int:
        return self.chain.order()

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def contains(self, g) -> bool:
        g = g if isinstance(g, Perm) else Perm(g)
        if self._elem_set is not None:
            return g in self._elem_set
        return self.chain.contains(g)

    __contains__ = contains

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.gens)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return (self.degree == other.degree and self.order == other.order
                and self.is_subgroup_of(other))

    __hash__ = None

    def __repr__(self) -> str:
        gs = ", ".join(str(g) for g in self.gens[:4])
        more = ", ..." if len(self.gens) > 4 else ""
        return f"PermGroup(degree={self.degree}, order={self.order}, gens=[{gs}{more}])"

    def random_element(self, rng: random.Random) -> Perm:
        return self.chain.random_element(rng)

    def chain_for(self, base_prefix) -> StabChain:
        """A stabilizer chain whose base starts with ``base_prefix``."""
        key = tuple(dict.fromkeys(base_prefix))
        main = self.chain
        if tuple(main.base[:len(key)]) == key:
            return main
        if key not in self._chains:
            rng = random.Random(hash(key) & 0xFFFFFFFF)
            self._chains[key] = _chain_with_known_order(
                self.degree, main.order(), main.random_element, key,
                main.strong_generators(), rng)
        return self._chains[key]

    def elements(self, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
        """All elements, sorted lexicographically, as an integer array."""
        if self._elements is None:
            if self.order > cap:
                raise CapacityError(f"group of order {self.order} exceeds enumeration cap {cap}")
            e = self.chain.elements()
            e = e[np.lexsort(e.T[::-1])]
            self._elements = e
        return self._elements

    def element_list(self, cap: int = DEFAULT_ENUM_CAP) -> list[Perm]:
        return [Perm(map(int, r)) for r in self.elements(cap)]

    def element_set(self, cap: int = DEFAULT_ENUM_CAP) -> set:
        if self._elem_set is None:
            self._elem_set = set(self.element_list(cap))
        return self._elem_set

    def subgroup(self, gens) -> "PermGroup":
        return PermGroup(self.degree, gens)

    def is_p_group(self, p: int) -> bool:
        return p_part(self.order, p) == self.order

    def minimal_generators(self) -> list[Perm]:
        """A generating subset of ``gens`` with redundant members removed."""
        keep = list(self.gens)
        i = 0
        target = self.order
        while i < len(keep):
            trial = keep[:i] + keep[i + 1:]
            if PermGroup(self.degree, trial).order == target:
                keep = trial
            else:
                i += 1
        return keep


def group_from_generators(degree: int, gens) -> PermGroup:
    return PermGroup(degree, gens)


def trivial_group(degree: int) -> PermGroup:
    return PermGroup(degree, [])


# ---------------------------------------------------------------- backtracking

class _ImageConstraint:
    """Constrain ``g`` so that ``g x_k g^-1`` lies in a candidate row set ``Y_k``."""

    def __init__(self, n, xs, ys, final):
        self.n = n
        self.xs = [tuple(x) for x in xs]
        self.xinv = [tuple(Perm(x).inverse()) for x in xs]
        self.ys = [np.asarray(y, dtype=np.int64).reshape(-1, n) for y in ys]
        self.final = final

    def initial(self):
        return [np.arange(y.shape[0]) for y in self.ys]

    def filter(self, cands, a, c, f):
        out = []
        for k, x in enumerate(self.xs):
            idx = cands[k]
            y = self.ys[k]
            a2 = x[a]
            if a2 == a:
                idx = idx[y[idx, c] == c]
            elif f[a2] >= 0:
                idx = idx[y[idx, c] == f[a2]]
            a0 = self.xinv[k][a]
            if a0 != a and f[a0] >= 0:
                idx = idx[y[idx, f[a0]] == c]
            if idx.size == 0:
                return None
            out.append(idx)
        return out


def _dfs(chain: StabChain, level: int, pi: Perm, f, cands, con, collect=None):
    base = chain.base
    if level == len(base):
        if con.final(pi):
            if collect is None:
                return pi
            collect.append(pi)
        return None
    b = base[level]
    trans = chain.trans[level]
    for delta in chain.sorted_orbit(level):
        c = pi[delta]
        nc = con.filter(cands, b, c, f)
        if nc is None:
            continue
        f[b] = c
        r = _dfs(chain, level + 1, pi * trans[delta], f, nc, con, collect)
        f[b] = -1
        if r is not None:
            return r
    return None


def _subgroup_search(chain: StabChain, con) -> PermGroup:
    """All ``g`` satisfying a subgroup-closed constraint, built level by level."""
    n = chain.degree
    base = chain.base
    m = len(base)
    prefix = [con.initial()]
    ff = [-1] * n
    for i in range(m):
        nc = con.filter(prefix[i], base[i], base[i], ff)
        if nc is None:
            raise InternalError("identity violates a subgroup constraint")
        ff[base[i]] = base[i]
        prefix.append(nc)
    found: list[Perm] = []
    for i in reversed(range(m)):
        b = base[i]
        f = [-1] * n
        for j in range(i):
            f[base[j]] = base[j]
        reached = orbit(b, found)
        failed: set = set()
        for c in chain.sorted_orbit(i):
            if c in reached or c in failed:
                continue
            g = None
            nc = con.filter(prefix[i], b, c, f)
            if nc is not None:
                f[b] = c
                g = _dfs(chain, i + 1, chain.trans[i][c], f, nc, con)
                f[b] = -1
            if g is not None:
                found.append(g)
                reached = orbit(b, found)
            else:
                failed |= orbit(c, found)
    level_gens = [[g for g in found if all(g[base[j]] == base[j] for j in range(i))] for i in range(m)]
    return PermGroup(n, found, chain=StabChain(n, base, level_gens))


def _support_order(gens, n: int) -> list[int]:
    out: list[int] = []
    seen: set = set()
    for p in range(n):
        if p in seen or all(g[p] == p for g in gens):
            continue
        queue = [p]
        seen.add(p)
        for x in queue:
            out.append(x)
            for g in gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return out


def _as_elements(H) -> np.ndarray:
    if isinstance(H, PermGroup):
        return H.elements()
    return np.asarray([tuple(h) for h in H], dtype=np.int64)


def _cycle_types(rows: np.ndarray):
    return [Perm(map(int, r)).cycle_type() for r in rows]


def _image_candidates(xs, target_rows: np.ndarray):
    types = _cycle_types(target_rows)
    out = []
    for x in xs:
        t = Perm(x).cycle_type()
        sel = [i for i, ty in enumerate(types) if ty == t]
        out.append(target_rows[sel])
    return out


def _gens_of(H):
    if isinstance(H, PermGroup):
        return H.gens
    return [Perm(h) for h in H]


def normalizer_search(G: PermGroup, xs, elems: np.ndarray) -> PermGroup:
    """``N_G(X)`` where ``X = <xs>`` has element rows ``elems``."""
    n = G.degree
    xs = [Perm(x) for x in xs if not Perm(x).is_identity()]
    if not xs:
        return G
    eset = {tuple(map(int, r)) for r in elems}
    chain = G.chain_for(_support_order(xs, n))
    con = _ImageConstraint(n, xs, _image_candidates(xs, elems),
                           lambda g: all(tuple(g.conj(x)) in eset for x in xs))
    return _subgroup_search(chain, con)


def centralizer_search(G: PermGroup, xs) -> PermGroup:
    n = G.degree
    xs = [Perm(x) for x in xs if not Perm(x).is_identity()]
    if not xs:
        return G
    chain = G.chain_for(_support_order(xs, n))
    con = _ImageConstraint(n, xs, [np.array([x]) for x in xs],
                           lambda g: all(g.conj(x) == x for x in xs))
    return _subgroup_search(chain, con)


def constrained_subgroup(G: PermGroup, xs, candidate_rows, final) -> PermGroup:
    """Subgroup of ``G`` cut out by a subgroup-closed predicate ``final``.

    ``candidate_rows[k]`` must contain every possible image ``g xs[k] g^-1``.
    """
    n = G.degree
    xs = [Perm(x) for x in xs]
    chain = G.chain_for(_support_order(xs, n))
    con = _ImageConstraint(n, xs, candidate_rows, final)
    return _subgroup_search(chain, con)


def conjugating_element(G: PermGroup, xs, targets) -> Perm | None:
    """Some ``g`` in ``G`` with ``g xs[k] g^-1 == targets[k]`` for every ``k``."""
    n = G.degree
    pairs = [(Perm(x), Perm(y)) for x, y in zip(xs, targets)]
    for x, y in pairs:
        if x.cycle_type() != y.cycle_type():
            return None
    pairs = [(x, y) for x, y in pairs if not x.is_identity()]
    if not pairs:
        return G.identity()
    xs = [x for x, _ in pairs]
    chain = G.chain_for(_support_order(xs, n))
    con = _ImageConstraint(n, xs, [np.array([y]) for _, y in pairs],
                           lambda g: all(g.conj(x) == y for x, y in pairs))
    return _dfs(chain, 0, G.identity(), [-1] * n, con.initial(), con)


def subgroup_conjugator(G: PermGroup, xs, target_elems: np.ndarray) -> Perm | None:
    """Some ``g`` with ``g <xs> g^-1 <= T`` where ``T`` has element rows ``target_elems``."""
    n = G.degree
    xs = [Perm(x) for x in xs if not Perm(x).is_identity()]
    if not xs:
        return G.identity()
    tset = {tuple(map(int, r)) for r in target_elems}
    chain = G.chain_for(_support_order(xs, n))
    con = _ImageConstraint(n, xs, _image_candidates(xs, target_elems),
                           lambda g: all(tuple(g.conj(x)) in tset for x in xs))
    return _dfs(chain, 0, G.identity(), [-1] * n, con.initial(), con)


def conjugate_group(g: Perm, H: PermGroup) -> PermGroup:
    return PermGroup(H.degree, [g.conj(h) for h in H.gens])


# ---------------------------------------------------------------- public operations

def normalizer(G: PermGroup, H: PermGroup) -> PermGroup:
    if H.order == G.order and H.is_subgroup_of(G):
        return G
    return normalizer_search(G, H.gens, H.elements())


def centralizer(G: PermGroup, H) -> PermGroup:
    return centralizer_search(G, _gens_of(H))


def center(G: PermGroup) -> PermGroup:
    return centralizer_search(G, G.gens)


@dataclass
class TransporterSet:
    """``N_G(P, Q)`` as a disjoint union of cosets ``g N_G(P)``."""

    source: PermGroup
    target: PermGroup
    ambient: PermGroup
    representatives: list
    stabilizer: PermGroup

    def __len__(self) -> int:
        return len(self.representatives) * self.stabilizer.order

    def elements(self):
        st = self.stabilizer.element_list()
        return [g * s for g in self.representatives for s in st]


def transporter(G: PermGroup, P: PermGroup, Q: PermGroup) -> TransporterSet:
    """``N_G(P, Q) = {g in G | g P g^-1 <= Q}``."""
    n = G.degree
    N = normalizer(G, P)
    xs = P.minimal_generators() if P.gens else []
    if not xs:
        return TransporterSet(P, Q, G, [G.identity()], N)
    q_rows = Q.elements()
    cands = _image_candidates(xs, q_rows)
    reps = []
    seen_images = set()
    order = P.order

    def walk(k, chosen):
        if k == len(xs):
            img = PermGroup(n, chosen)
            if img.order != order:
                return
            key = frozenset(map(tuple, img.element_list()))
            if key in seen_images:
                return
            g = conjugating_element(G, xs, chosen)
            if g is not None:
                seen_images.add(key)
                reps.append(g)
            return
        for row in cands[k]:
            walk(k + 1, chosen + [Perm(map(int, row))])

    walk(0, [])
    return TransporterSet(P, Q, G, reps, N)


def sylow_subgroup(G: PermGroup, p: int, seed: int = 0) -> PermGroup:
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    n = G.degree
    target = p_part(G.order, p)
    T = trivial_group(n)
    rng = random.Random(seed)
    while T.order < target:
        N = G if not T.gens else normalizer(G, T)
        for _ in range(200_000):
            x = N.random_element(rng)
            o = x.order()
            m = o // p_part(o, p)
            y = x ** m
            if y.is_identity() or T.contains(y):
                continue
            T = PermGroup(n, T.gens + [y])
            break
        else:
            raise InternalError("Sylow search did not progress")
    return T


def normal_closure(G: PermGroup, gens) -> PermGroup:
    n = G.degree
    Kg = [Perm(g) for g in gens if not Perm(g).is_identity()]
    Kgrp = PermGroup(n, Kg)
    queue = list(Kgrp.gens)
    while queue:
        k = queue.pop()
        for g in G.gens:
            c = g.conj(k)
            if not Kgrp.contains(c):
                Kgrp = PermGroup(n, Kgrp.chain.strong_generators() + [c])
                queue.append(c)
    return Kgrp


def commutator(a: Perm, b: Perm) -> Perm:
    return a.inverse() * b.inverse() * a * b


def derived_subgroup(G: PermGroup) -> PermGroup:
    gs = G.gens
    return normal_closure(G, [commutator(a, b) for i, a in enumerate(gs) for b in gs[i + 1:]])


def op_power_residual(G: PermGroup, p: int) -> PermGroup:
    """``O^p(G)``: smallest normal subgroup with p-group quotient."""
    N = G
    while True:
        gs = N.gens
        seeds = [a ** p for a in gs] + [commutator(a, b) for i, a in enumerate(gs) for b in gs[i + 1:]]
        Kn = normal_closure(N, seeds)
        if Kn.order == N.order:
            return N
        N = Kn


def opprime_residual(G: PermGroup, p: int) -> PermGroup:
    """``O^{p'}(G)``: normal closure of a Sylow p-subgroup."""
    return normal_closure(G, sylow_subgroup(G, p).gens)


def op_core(G: PermGroup, p: int) -> PermGroup:
    """``O_p(G)``: elements of a Sylow p-subgroup whose whole class stays inside it."""
    S = sylow_subgroup(G, p)
    rows = S.elements()
    keep = {tuple(map(int, r)) for r in rows}
    changed = True
    while changed:
        changed = False
        for x in list(keep):
            xp = Perm(x)
            if any(tuple(g.conj(xp)) not in keep for g in G.gens):
                keep.discard(x)
                changed = True
    return PermGroup(G.degree, [Perm(x) for x in keep])


def conjugacy_class_reps(G: PermGroup, cap: int = DEFAULT_ENUM_CAP) -> list[Perm]:
    elems = G.elements(cap)
    idx = K.RowIndex(elems, base=G.degree)
    done = np.zeros(len(elems), dtype=bool)
    reps = []
    for i in range(len(elems)):
        if done[i]:
            continue
        reps.append(Perm(map(int, elems[i])))
        cls = idx.lookup(K.conjugate_rows(elems, elems[i]))
        done[cls] = True
    return reps


def opprime_core(G: PermGroup, p: int, cap: int = 200_000) -> PermGroup:
    """``O_{p'}(G)``: generated by the elements whose normal closure is a p'-group."""
    if G.order > cap:
        raise CapacityError(f"O_p' computation capped at group order {cap}")
    Kgrp = trivial_group(G.degree)
    for x in conjugacy_class_reps(G):
        if x.order() % p == 0 or Kgrp.contains(x):
            continue
        N = normal_closure(G, [x])
        if N.order % p:
            Kgrp = PermGroup(G.degree, Kgrp.gens + N.gens)
    return Kgrp


def core(G: PermGroup, H: PermGroup) -> PermGroup:
    """Largest normal subgroup of ``G`` inside ``H`` (``H`` must be enumerable)."""
    keep = {tuple(map(int, r)) for r in H.elements()}
    changed = True
    while changed:
        changed = False
        for x in list(keep):
            xp = Perm(x)
            if any(tuple(g.conj(xp)) not in keep for g in G.gens):
                keep.discard(x)
                changed = True
    return PermGroup(G.degree, [Perm(x) for x in keep])


def is_normal(G: PermGroup, N: PermGroup) -> bool:
    return N.is_subgroup_of(G) and all(N.contains(g.conj(x)) for g in G.gens for x in N.gens)


def direct_product(*groups: PermGroup) -> PermGroup:
    n = sum(G.degree for G in groups)
    gens = []
    off = 0
    for G in groups:
        for g in G.gens:
            img = list(range(n))
            for i, x in enumerate(g):
                img[off + i] = off + x
            gens.append(Perm(img))
        off += G.degree
    return PermGroup(n, gens)


def embed_perm(g: Perm, offset: int, n: int) -> Perm:
    img = list(range(n))
    for i, x in enumerate(g):
        img[offset + i] = offset + x
    return Perm(img)


# ---------------------------------------------------------------- quotients

class Quotient:
    """``G/N`` as a permutation group together with the projection map."""

    def __init__(self, G, N, group, labels, index, action):
        self.G = G
        self.N = N
        self.group = group
        self._labels = labels
        self._index = index
        self._action = action

    def project(self, g: Perm) -> Perm:
        i = int(self._index.lookup(np.array([tuple(g)]))[0])
        if i < 0:
            raise InputError("element not in the group")
        return self._action[self._labels[i]]


def quotient_group(G: PermGroup, N: PermGroup, cap: int = 200_000) -> Quotient:
    """Faithful permutation representation of ``G/N``."""
    from .tablegroup import TableGroup

    if not is_normal(G, N):
        raise InputError("quotient by a non-normal subgroup")
    if G.order > cap:
        raise CapacityError(f"quotient construction capped at group order {cap}")
    elems = G.elements()
    idx = K.RowIndex(elems, base=G.degree)
    nrows = N.elements()
    labels = np.full(len(elems), -1, dtype=np.int64)
    reps = []
    for i in range(len(elems)):
        if labels[i] >= 0:
            continue
        coset = idx.lookup(elems[i][nrows])
        labels[coset] = len(reps)
        reps.append(i)
    m = len(reps)
    mul = np.empty((m, m), dtype=np.int64)
    rep_rows = elems[reps]
    for a in range(m):
        prods = rep_rows[a][rep_rows]
        mul[a] = labels[idx.lookup(prods)]
    ident = int(labels[idx.lookup(np.arange(G.degree)[None, :])[0]])
    order = [ident] + [i for i in range(m) if i != ident]
    pos = np.empty(m, dtype=np.int64)
    pos[order] = np.arange(m)
    mul = pos[mul[np.ix_(order, order)]]
    T = TableGroup(mul)
    labels = pos[labels]
    H = T.largest_core_free_candidate()
    action = T.coset_action(H)
    deg = action.shape[1]
    qgrp = PermGroup(deg, [Perm(map(int, action[labels[idx.lookup(np.array([tuple(g)]))[0]]]))
                            for g in G.gens])
    act = [Perm(map(int, r)) for r in action]
    return Quotient(G, N, qgrp, labels, idx, act)


# ---------------------------------------------------------------- automorphisms

@dataclass
class AutomorphismGroup:
    """Automorphisms of ``G`` stored as images of a fixed generating list."""

    group: PermGroup
    gens: list
    images: list
    inner: list
    out_class: list

    @property
    def order(self) -> int:
        return len(self.images)

    @property
    def out_order(self) -> int:
        return len(set(self.out_class))

    @property
    def inn_order(self) -> int:
        return sum(self.inner)

    def full_map(self, k: int) -> dict:
        """Element-wise map of automorphism ``k``."""
        return _extend_map(self.gens, self.images[k])

    def apply(self, k: int, x: Perm) -> Perm:
        return self.full_map(k)[Perm(x)]

    def normalizing(self, S: PermGroup) -> list[int]:
        """Indices of automorphisms with ``alpha(S) = S``."""
        sg = S.gens
        out = []
        for k in range(self.order):
            m = self.full_map(k)
            if all(S.contains(m[s]) for s in sg):
                out.append(k)
        return out


def _extend_map(gens, images) -> dict:
    n = len(gens[0]) if gens else 0
    ident = Perm.identity(n) if gens else Perm(())
    m = {ident: Perm.identity(len(images[0])) if images else ident}
    queue = [ident]
    for x in queue:
        fx = m[x]
        for g, h in zip(gens, images):
            y = x * g
            if y not in m:
                m[y] = fx * h
                queue.append(y)
    return m


def automorphism_group(G: PermGroup, cap: int = DEFAULT_AUT_CAP) -> AutomorphismGroup:
    """All automorphisms of ``G`` by backtracking over generator images."""
    if G.order > cap:
        raise CapacityError(f"|G| = {G.order} exceeds the automorphism brute-force cap {cap}")
    n = G.degree
    elems = G.elements()
    N = len(elems)
    idx = K.RowIndex(elems, base=n)
    ident = int(idx.lookup(np.arange(n)[None, :])[0])
    gens = G.minimal_generators()
    if not gens:
        return AutomorphismGroup(G, [], [()], [True], [0])
    gidx = [int(idx.lookup(np.array([tuple(g)]))[0]) for g in gens]

    # right multiplication tables by arbitrary elements, computed on demand
    def right_table(j):
        return idx.lookup(elems[:, elems[j]])  # row i -> elems[i] * elems[j]

    rt_gens = [right_table(j) for j in gidx]
    # BFS tree from identity
    parent = np.full(N, -1, dtype=np.int64)
    via = np.full(N, -1, dtype=np.int64)
    seen = np.zeros(N, dtype=bool)
    seen[ident] = True
    order_list = [ident]
    for x in order_list:
        for k, t in enumerate(rt_gens):
            y = int(t[x])
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                via[y] = k
                order_list.append(y)
    tree = np.array(order_list[1:], dtype=np.int64)

    orders = np.array([Perm(map(int, r)).order() for r in elems])
    # class sizes
    csize = np.zeros(N, dtype=np.int64)
    done = np.zeros(N, dtype=bool)
    for i in range(N):
        if done[i]:
            continue
        cls = np.unique(idx.lookup(K.conjugate_rows(elems, elems[i])))
        done[cls] = True
        csize[cls] = len(cls)
    inv = idx.lookup(np.argsort(elems, axis=1))
    cands = [np.flatnonzero((orders == orders[j]) & (csize == csize[j])) for j in gidx]

    # cheap word filters: orders of short products
    words = []
    d = len(gidx)
    for a in range(d):
        for b in range(a + 1, d):
            words.append((a, b))

    def mul_idx(i, j):
        return int(idx.lookup(elems[i][elems[j]][None, :])[0])

    word_orders = {(a, b): orders[mul_idx(gidx[a], gidx[b])] for a, b in words}
    word_orders_inv = {(a, b): orders[mul_idx(gidx[a], int(inv[gidx[b]]))] for a, b in words}

    images = []

    def check(choice):
        rts = [right_table(j) for j in choice]
        phi = np.full(N, -1, dtype=np.int64)
        phi[ident] = ident
        for y in tree:
            phi[y] = rts[via[y]][phi[parent[y]]]
        if len(np.unique(phi)) != N:
            return False
        for k, t in enumerate(rt_gens):
            if np.any(phi[t] != rts[k][phi]):
                return False
        return True

    def walk(k, choice):
        if k == d:
            if check(choice):
                images.append(tuple(choice))
            return
        for c in cands[k]:
            c = int(c)
            ok = True
            for a in range(k):
                if orders[mul_idx(choice[a], c)] != word_orders[(a, k)]:
                    ok = False
                    break
                if orders[mul_idx(choice[a], int(inv[c]))] != word_orders_inv[(a, k)]:
                    ok = False
                    break
            if ok:
                walk(k + 1, choice + [c])

    walk(0, [])
    image_perms = [tuple(Perm(map(int, elems[j])) for j in ch) for ch in images]
    # inner automorphisms and outer classes
    gen_rows = np.array([tuple(g) for g in gens], dtype=np.int64)
    conj_imgs = np.stack([K.conjugate_rows(elems, r) for r in gen_rows], axis=1)  # N x d x n
    inner_keys = {tuple(map(tuple, conj_imgs[i])) for i in range(N)}
    key_of = {tuple(map(tuple, im)): k for k, im in enumerate(image_perms)}
    inner = [tuple(map(tuple, im)) in inner_keys for im in image_perms]
    out_class = [-1] * len(image_perms)
    cls_id = 0
    for k, im in enumerate(image_perms):
        if out_class[k] >= 0:
            continue
        # coset Inn(G) * alpha: c_g(alpha(x)) for all g
        rows = np.array([tuple(p) for p in im], dtype=np.int64)
        conj = np.stack([K.conjugate_rows(elems, r) for r in rows], axis=1)
        for i in range(N):
            j = key_of.get(tuple(map(tuple, conj[i])))
            if j is not None:
                out_class[j] = cls_id
        cls_id += 1
    return AutomorphismGroup(G, gens, image_perms, inner, out_class)


# ---------------------------------------------------------------- text format

def parse_group_text(text: str) -> tuple[PermGroup, int | None]:
    """Parse the ``degree:/p:/generators:`` group format."""
    degree = None
    p = None
    gens_txt: list[str] = []
    in_gens = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("degree:"):
            degree = _parse_int(line.split(":", 1)[1], "degree")
            in_gens = False
        elif low.startswith("p:"):
            p = _parse_int(line.split(":", 1)[1], "p")
            in_gens = False
        elif low.startswith("generators:"):
            in_gens = True
            rest = line.split(":", 1)[1].strip()
            if rest:
                gens_txt.append(rest)
        elif in_gens:
            gens_txt.append(line)
        else:
            raise InputError(f"unexpected line in group file: {raw!r}")
    if degree is None or degree < 1:
        raise InputError("group file needs a positive 'degree:' line")
    gens = [Perm.parse(t, degree) for t in gens_txt]
    if p is not None and not is_prime(p):
        raise InputError(f"p = {p} is not prime")
    return PermGroup(degree, gens), p


def _parse_int(s: str, what: str) -> int:
    try:
        return int(s.strip())
    except ValueError:
        raise InputError(f"bad {what}: {s.strip()!r}") from None


def format_group_text(G: PermGroup, p: int | None = None) -> str:
    lines = [f"degree: {G.degree}"]
    if p is not None:
        lines.append(f"p: {p}")
    lines.append("generators:")
    lines += [str(g) for g in G.gens]
    return "\n".join(lines) + "\n"
