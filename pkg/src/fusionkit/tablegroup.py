"""Small groups given by a Cayley table, with subgroups as boolean masks."""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .errors import InputError


class TableGroup:
    """Group on ``{0..n-1}`` with ``mul[a, b] = a*b`` and identity ``0``."""

    def __init__(self, mul: np.ndarray):
        mul = np.ascontiguousarray(mul, dtype=np.int64)
        n = mul.shape[0]
        if mul.shape != (n, n) or not np.array_equal(mul[0], np.arange(n)):
            raise InputError("Cayley table must have identity at index 0")
        self.mul = mul
        self.n = n
        self.inv = np.argmin(mul, axis=1)  # mul[a, inv[a]] == 0 and 0 is minimal
        self._orders = None
        self._conj = None

    @property
    def order(self) -> int:
        return self.n

    @property
    def conj(self) -> np.ndarray:
        """``conj[g, x] = g x g^-1``."""
        if self._conj is None:
            self._conj = self.mul[self.mul, self.inv[:, None]]
        return self._conj

    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            o = np.ones(self.n, dtype=np.int64)
            cur = np.arange(self.n)
            live = cur != 0
            while live.any():
                cur = np.where(live, self.mul[cur, np.arange(self.n)], cur)
                o[live] += 1
                live = live & (cur != 0)
            self._orders = o
        return self._orders

    def power(self, x: int, k: int) -> int:
        r = 0
        for _ in range(k):
            r = int(self.mul[r, x])
        return r

    # -- subgroups
    def closure(self, gens) -> np.ndarray:
        return K.closure(self.mul, np.asarray(list(gens), dtype=np.int64))

    def full(self) -> np.ndarray:
        return np.ones(self.n, dtype=bool)

    def trivial(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[0] = True
        return m

    def normalizer(self, H: np.ndarray, within: np.ndarray | None = None) -> np.ndarray:
        hs = np.flatnonzero(H)
        ok = H[self.conj[:, hs]].all(axis=1)
        return ok if within is None else ok & within

    def centralizer(self, H: np.ndarray, within: np.ndarray | None = None) -> np.ndarray:
        hs = np.flatnonzero(H)
        ok = (self.conj[:, hs] == hs[None, :]).all(axis=1)
        return ok if within is None else ok & within

    def center(self, H: np.ndarray) -> np.ndarray:
        return self.centralizer(H, H)

    def is_normal(self, N: np.ndarray, G: np.ndarray | None = None) -> bool:
        G = self.full() if G is None else G
        return bool(N[self.conj[np.ix_(np.flatnonzero(G), np.flatnonzero(N))]].all())

    def conjugate_mask(self, g: int, H: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[self.conj[g, np.flatnonzero(H)]] = True
        return out

    def product(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n, dtype=bool)
        out[self.mul[np.ix_(np.flatnonzero(A), np.flatnonzero(B))].ravel()] = True
        return out

    def commutator_subgroup(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        a = np.flatnonzero(A)
        b = np.flatnonzero(B)
        ab = self.mul[np.ix_(a, b)]
        ainv_binv = self.mul[np.ix_(self.inv[a], self.inv[b])]
        comm = self.mul[ainv_binv, ab]
        return self.closure(np.unique(comm))

    def frattini(self, H: np.ndarray, p: int) -> np.ndarray:
        """``Phi(H) = [H,H] H^p`` for a p-group ``H``."""
        hs = np.flatnonzero(H)
        pw = hs.copy()
        for _ in range(p - 1):
            pw = self.mul[pw, hs]
        gens = np.unique(np.concatenate([pw, np.flatnonzero(self.commutator_subgroup(H, H))]))
        return self.closure(gens)

    def cosets(self, H: np.ndarray) -> np.ndarray:
        """Label of the left coset ``gH`` for every element ``g``."""
        hs = np.flatnonzero(H)
        lab = np.full(self.n, -1, dtype=np.int64)
        c = 0
        for g in range(self.n):
            if lab[g] < 0:
                lab[self.mul[g, hs]] = c
                c += 1
        return lab

    def core(self, H: np.ndarray) -> np.ndarray:
        hs = np.flatnonzero(H)
        ok = H[self.conj[:, hs]].all(axis=0)
        out = np.zeros(self.n, dtype=bool)
        out[hs[ok]] = True
        return out

    def coset_action(self, H: np.ndarray) -> np.ndarray:
        """Row ``g`` is the permutation of left cosets of ``H`` induced by ``g``."""
        lab = self.cosets(H)
        k = int(lab.max()) + 1
        reps = np.zeros(k, dtype=np.int64)
        for g in range(self.n - 1, -1, -1):
            reps[lab[g]] = g
        return lab[self.mul[:, reps]]

    # -- p-local structure
    def p_elements(self, p: int) -> np.ndarray:
        o = self.element_orders()
        pp = o.copy()
        while True:
            nxt = np.where(pp % p == 0, pp // p, pp)
            if np.array_equal(nxt, pp):
                break
            pp = nxt
        return pp == 1

    def sylow(self, p: int, within: np.ndarray | None = None) -> np.ndarray:
        G = self.full() if within is None else within
        size = int(G.sum())
        target = 1
        while size % p == 0:
            size //= p
            target *= p
        pel = self.p_elements(p) & G
        T = self.trivial()
        while int(T.sum()) < target:
            N = self.normalizer(T, G)
            cand = np.flatnonzero(pel & N & ~T)
            # any p-element of N_G(T) outside T enlarges T
            T = self.closure(np.concatenate([np.flatnonzero(T), cand[:1]]))
        return T

    def op_core(self, p: int, within: np.ndarray | None = None) -> np.ndarray:
        G = self.full() if within is None else within
        T = self.sylow(p, G)
        gs = np.flatnonzero(G)
        ts = np.flatnonzero(T)
        ok = T[self.conj[np.ix_(gs, ts)]].all(axis=0)
        out = np.zeros(self.n, dtype=bool)
        out[ts[ok]] = True
        return out

    def op_power_residual(self, p: int, within: np.ndarray | None = None) -> np.ndarray:
        """Generated by the p'-elements."""
        G = self.full() if within is None else within
        return self.closure(np.flatnonzero(~self.p_elements(p) & G))

    def opprime_residual(self, p: int, within: np.ndarray | None = None) -> np.ndarray:
        """Generated by the p-elements."""
        G = self.full() if within is None else within
        return self.closure(np.flatnonzero(self.p_elements(p) & G))

    def sylow_subgroups(self, p: int, within: np.ndarray | None = None) -> list[np.ndarray]:
        G = self.full() if within is None else within
        T = self.sylow(p, G)
        seen = {}
        for g in np.flatnonzero(G):
            C = self.conjugate_mask(int(g), T)
            seen.setdefault(np.packbits(C).tobytes(), C)
        return list(seen.values())

    def has_strongly_embedded(self, p: int, modulo: np.ndarray | None = None,
                              within: np.ndarray | None = None) -> bool:
        """Whether ``G/modulo`` has a strongly p-embedded subgroup.

        Equivalent to: ``p`` divides ``|G/modulo|`` and the graph on Sylow
        p-subgroups, joined when they meet in more than ``modulo``, is
        disconnected.
        """
        G = self.full() if within is None else within
        base = 1 if modulo is None else int(modulo.sum())
        syl = self.sylow_subgroups(p, G)
        if int(syl[0].sum()) == base:
            return False
        return not _connected(syl, base)

    def quotient(self, N: np.ndarray) -> tuple["TableGroup", np.ndarray]:
        lab = self.cosets(N)
        k = int(lab.max()) + 1
        reps = np.zeros(k, dtype=np.int64)
        for g in range(self.n - 1, -1, -1):
            reps[lab[g]] = g
        mul = lab[self.mul[np.ix_(reps, reps)]]
        return TableGroup(mul), lab

    def largest_core_free_candidate(self) -> np.ndarray:
        """A core-free subgroup of large order, from cheap candidate families."""
        cands = [self.trivial()]
        for x in range(1, self.n):
            cands.append(self.closure([x]))
        primes = sorted({q for q in range(2, self.n + 1) if self.n % q == 0
                         and all(q % d for d in range(2, int(q**0.5) + 1))})
        for q in primes:
            T = self.sylow(q)
            cands.append(T)
            cands.append(self.normalizer(T))
        extra = []
        for C in cands:
            extra.append(self.normalizer(C))
        cands += extra
        best = self.trivial()
        for C in cands:
            if C.sum() > best.sum() and self.core(C).sum() == 1:
                best = C
        return best

    def subgroups(self, limit: int = 200_000) -> list[np.ndarray]:
        """All subgroups via cyclic extension (works for any small group)."""
        found = {np.packbits(self.trivial()).tobytes(): self.trivial()}
        frontier = [self.trivial()]
        while frontier:
            nxt = []
            for H in frontier:
                for x in np.flatnonzero(~H):
                    C = self.closure(np.append(np.flatnonzero(H), x))
                    key = np.packbits(C).tobytes()
                    if key not in found:
                        found[key] = C
                        nxt.append(C)
                        if len(found) > limit:
                            raise InputError("too many subgroups")
            frontier = nxt
        return list(found.values())


def _connected(groups: list[np.ndarray], base: int) -> bool:
    m = len(groups)
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    mat = np.array(groups, dtype=np.int64)
    inter = mat @ mat.T
    for i in range(m):
        for j in np.flatnonzero(inter[i, i + 1:] > base) + i + 1:
            ri, rj = find(i), find(int(j))
            if ri != rj:
                parent[ri] = rj
    return len({find(i) for i in range(m)}) == 1


def table_from_perms(perms) -> tuple[TableGroup, np.ndarray, K.RowIndex]:
    """Cayley table of a list of permutations forming a group (identity sorted first)."""
    rows = np.asarray(perms, dtype=np.int64)
    rows = rows[np.lexsort(rows.T[::-1])]
    idx = K.RowIndex(rows, base=rows.shape[1])
    n = len(rows)
    mul = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        mul[a] = idx.lookup(rows[a][rows])
    if (mul < 0).any():
        raise InputError("permutations do not form a group")
    return TableGroup(mul), rows, idx
