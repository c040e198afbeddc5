"""Hot loops over Cayley tables and permutation arrays.

Each kernel has a numba version and a pure-numpy version with the same
contract.  Setting ``FUSIONKIT_NO_NUMBA=1`` selects the numpy versions.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

USE_NUMBA = njit is not None and os.environ.get("FUSIONKIT_NO_NUMBA", "").lower() not in ("1", "true", "yes")


# ---------------------------------------------------------------- numpy paths

def closure_np(mul: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """Boolean mask of the subgroup generated by ``gens`` (identity is index 0)."""
    n = mul.shape[0]
    mask = np.zeros(n, dtype=np.bool_)
    mask[0] = True
    gens = np.asarray(gens, dtype=np.int64)
    if gens.size == 0:
        return mask
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        nxt = mul[frontier][:, gens].ravel()
        nxt = np.unique(nxt[~mask[nxt]])
        mask[nxt] = True
        frontier = nxt
    return mask


def extend_hom_np(mul_src, gens, mul_dst, imgs):
    """Extend ``gens[k] -> imgs[k]`` to a homomorphism on the generated subgroup.

    Returns an int array ``phi`` (``-1`` off the subgroup) or ``None`` when the
    assignment is not well defined.
    """
    n = mul_src.shape[0]
    phi = np.full(n, -1, dtype=np.int64)
    phi[0] = 0
    gens = np.asarray(gens, dtype=np.int64)
    imgs = np.asarray(imgs, dtype=np.int64)
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        new_parts = []
        for k in range(gens.size):
            t = mul_src[frontier, gens[k]]
            v = mul_dst[phi[frontier], imgs[k]]
            known = phi[t] >= 0
            if np.any(phi[t[known]] != v[known]):
                return None
            t, v = t[~known], v[~known]
            if t.size:
                order = np.argsort(t, kind="stable")
                t, v = t[order], v[order]
                first = np.ones(t.size, dtype=np.bool_)
                first[1:] = t[1:] != t[:-1]
                dup_val = v[np.maximum.accumulate(np.where(first, np.arange(t.size), 0))]
                if np.any(dup_val != v):
                    return None
                phi[t[first]] = v[first]
                new_parts.append(t[first])
        frontier = np.concatenate(new_parts) if new_parts else np.empty(0, dtype=np.int64)
    return phi


def conjugate_rows_np(elems: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Row ``i`` of the result is ``g x g^-1`` for ``g = elems[i]``."""
    out = np.empty_like(elems)
    rows = np.arange(elems.shape[0])[:, None]
    out[rows, elems] = elems[:, x]
    return out


# ---------------------------------------------------------------- numba paths

if njit is not None:

    @njit(cache=True)
    def closure_nb(mul, gens):
        n = mul.shape[0]
        mask = np.zeros(n, dtype=np.bool_)
        mask[0] = True
        queue = np.empty(n, dtype=np.int64)
        queue[0] = 0
        head, tail = 0, 1
        while head < tail:
            x = queue[head]
            head += 1
            for k in range(gens.shape[0]):
                y = mul[x, gens[k]]
                if not mask[y]:
                    mask[y] = True
                    queue[tail] = y
                    tail += 1
        return mask

    @njit(cache=True)
    def _extend_hom_nb(mul_src, gens, mul_dst, imgs):
        n = mul_src.shape[0]
        phi = np.full(n, -1, dtype=np.int64)
        phi[0] = 0
        queue = np.empty(n, dtype=np.int64)
        queue[0] = 0
        head, tail = 0, 1
        ok = True
        while head < tail and ok:
            x = queue[head]
            head += 1
            for k in range(gens.shape[0]):
                y = mul_src[x, gens[k]]
                v = mul_dst[phi[x], imgs[k]]
                if phi[y] < 0:
                    phi[y] = v
                    queue[tail] = y
                    tail += 1
                elif phi[y] != v:
                    ok = False
                    break
        return phi, ok

    def extend_hom_nb(mul_src, gens, mul_dst, imgs):
        phi, ok = _extend_hom_nb(mul_src, np.asarray(gens, dtype=np.int64), mul_dst,
                                 np.asarray(imgs, dtype=np.int64))
        return phi if ok else None

    @njit(cache=True)
    def conjugate_rows_nb(elems, x):
        m, n = elems.shape
        out = np.empty_like(elems)
        for r in range(m):
            for i in range(n):
                out[r, elems[r, i]] = elems[r, x[i]]
        return out

else:  # pragma: no cover
    closure_nb = extend_hom_nb = conjugate_rows_nb = None


def closure(mul, gens):
    if USE_NUMBA:
        return closure_nb(mul, np.asarray(gens, dtype=np.int64))
    return closure_np(mul, gens)


def extend_hom(mul_src, gens, mul_dst, imgs):
    if USE_NUMBA:
        return extend_hom_nb(mul_src, gens, mul_dst, imgs)
    return extend_hom_np(mul_src, gens, mul_dst, imgs)


def conjugate_rows(elems, x):
    x = np.asarray(x, dtype=elems.dtype)
    if USE_NUMBA:
        return conjugate_rows_nb(elems, x)
    return conjugate_rows_np(elems, x)


class RowIndex:
    """Exact lookup of integer rows (permutations, generator images) by content."""

    def __init__(self, rows: np.ndarray, base: int | None = None):
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        self.width = rows.shape[1]
        self.base = int(base if base is not None else (rows.max() + 1 if rows.size else 1))
        self._int = self.base ** max(self.width, 1) < 2**62
        if self._int:
            self._pw = self.base ** np.arange(self.width, dtype=np.int64)
            keys = rows @ self._pw if self.width else np.zeros(rows.shape[0], dtype=np.int64)
            self._order = np.argsort(keys, kind="stable")
            self._sorted = keys[self._order]
        else:
            self._dict = {r.tobytes(): i for i, r in enumerate(rows)}

    def keys(self, rows: np.ndarray):
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        if self._int:
            return rows @ self._pw
        return [r.tobytes() for r in rows]

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        rows = np.ascontiguousarray(np.atleast_2d(rows), dtype=np.int64)
        if self._int:
            k = rows @ self._pw
            pos = np.searchsorted(self._sorted, k)
            pos = np.minimum(pos, len(self._sorted) - 1)
            hit = self._sorted[pos] == k if len(self._sorted) else np.zeros(len(k), dtype=bool)
            return np.where(hit, self._order[pos], -1)
        return np.array([self._dict.get(r.tobytes(), -1) for r in rows], dtype=np.int64)
