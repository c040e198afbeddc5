"""Permutation models of the example groups, addressable by name."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import factorial
from pathlib import Path

from .errors import InputError
from .perm import Perm
from .permgrp import PermGroup, is_prime, parse_group_text


@dataclass
class CatalogEntry:
    name: str
    params: dict
    group: PermGroup = field(repr=False)
    expected_order: int
    default_p: int | None = None

    def check(self) -> bool:
        return self.group.order == self.expected_order


def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise InputError("cyclic(n) needs n >= 1")
    if n == 1:
        return PermGroup(1, [])
    return PermGroup(n, [Perm([(i + 1) % n for i in range(n)])])


def dihedral(k: int) -> PermGroup:
    """Dihedral group of order ``2^k`` acting on a ``2^(k-1)``-gon."""
    if k < 2:
        raise InputError("dihedral(k) needs k >= 2")
    m = 2 ** (k - 1)
    if m == 2:
        # Klein four: the square's symmetries do not give a faithful 2-gon
        return PermGroup(4, [Perm([1, 0, 3, 2]), Perm([2, 3, 0, 1])])
    rot = Perm([(i + 1) % m for i in range(m)])
    ref = Perm([(-i) % m for i in range(m)])
    return PermGroup(m, [rot, ref])


def _metacyclic_regular(k: int, twist, square):
    """Regular action of ``<a, b>`` with ``|a| = 2^(k-1)``, ``b a b^-1 = a^twist``, ``b^2 = a^square``.

    Elements are ``a^i b^j`` with index ``i + N j``.
    """
    N = 2 ** (k - 1)

    def mul(x, y):
        i, j = x % N, x // N
        k2, l = y % N, y // N
        e = i + k2 * (twist if j else 1)
        if j and l:
            return (e + square) % N
        return (e % N) + N * ((j + l) % 2)

    a = Perm([mul(1, x) for x in range(2 * N)])
    b = Perm([mul(N, x) for x in range(2 * N)])
    return PermGroup(2 * N, [a, b]), a, b


def semidihedral(k: int) -> PermGroup:
    """Semidihedral group of order ``2^k``: ``b a b^-1 = a^(2^(k-2) - 1)``, ``b^2 = 1``."""
    if k < 4:
        raise InputError("semidihedral(k) needs k >= 4")
    G, _, _ = _metacyclic_regular(k, 2 ** (k - 2) - 1, 0)
    return G


def quaternion(k: int) -> PermGroup:
    """Generalized quaternion group of order ``2^k``."""
    if k < 3:
        raise InputError("quaternion(k) needs k >= 3")
    N = 2 ** (k - 1)
    G, _, _ = _metacyclic_regular(k, N - 1, N // 2)
    return G


def elem_abelian(p: int, r: int) -> PermGroup:
    if not is_prime(p) or r < 0:
        raise InputError("elem_abelian(p, r) needs p prime and r >= 0")
    n = max(p * r, 1)
    gens = []
    for t in range(r):
        img = list(range(n))
        for i in range(p):
            img[t * p + i] = t * p + (i + 1) % p
        gens.append(Perm(img))
    return PermGroup(n, gens)


def symmetric(n: int) -> PermGroup:
    if n < 1:
        raise InputError("symmetric(n) needs n >= 1")
    if n == 1:
        return PermGroup(1, [])
    gens = [Perm([(i + 1) % n for i in range(n)])]
    if n > 2:
        gens.append(Perm([1, 0] + list(range(2, n))))
    return PermGroup(n, gens)


def alternating(n: int) -> PermGroup:
    if n < 1:
        raise InputError("alternating(n) needs n >= 1")
    if n < 3:
        return PermGroup(n, [])
    gens = []
    for i in range(n - 2):
        img = list(range(n))
        img[i], img[i + 1], img[i + 2] = i + 1, i + 2, i
        gens.append(Perm(img))
    return PermGroup(n, gens)


# ---------------------------------------------------------------- finite fields

class _Field:
    """``GF(p^e)`` with elements ``0..q-1`` as base-``p`` coefficient vectors."""

    def __init__(self, q: int):
        p, e = _prime_power(q)
        self.p, self.e, self.q = p, e, q
        poly = _irreducible(p, e)
        self.add = [[0] * q for _ in range(q)]
        self.mul = [[0] * q for _ in range(q)]
        digits = [self._digits(x) for x in range(q)]
        for x in range(q):
            for y in range(q):
                self.add[x][y] = self._num([(a + b) % p for a, b in zip(digits[x], digits[y])])
                self.mul[x][y] = self._num(_polymulmod(digits[x], digits[y], poly, p))
        self.neg = [next(y for y in range(q) if self.add[x][y] == 0) for x in range(q)]
        self.inv = [0] + [next(y for y in range(1, q) if self.mul[x][y] == 1) for x in range(1, q)]
        self.primitive = next(x for x in range(1, q) if self._order(x) == q - 1)

    def _digits(self, x):
        return [(x // self.p**i) % self.p for i in range(self.e)]

    def _num(self, ds):
        return sum(d * self.p**i for i, d in enumerate(ds))

    def _order(self, x):
        y, k = x, 1
        while y != 1:
            y = self.mul[y][x]
            k += 1
        return k


def _prime_power(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                raise InputError(f"{q} is not a prime power")
            return p, e
    raise InputError(f"{q} is not a prime power")


def _polymulmod(a, b, mod, p):
    e = len(a)
    prod_ = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod_[i + j] = (prod_[i + j] + x * y) % p
    # mod is monic of degree e, given by its lower coefficients
    for d in range(len(prod_) - 1, e - 1, -1):
        c = prod_[d]
        if c:
            prod_[d] = 0
            for i, m in enumerate(mod):
                prod_[d - e + i] = (prod_[d - e + i] - c * m) % p
    return prod_[:e]


def _irreducible(p: int, e: int):
    """Lower coefficients of a monic irreducible polynomial of degree ``e`` over ``GF(p)``."""
    if e == 1:
        return [0]
    for low in product(range(p), repeat=e):
        if low[0] == 0:
            continue
        coeffs = list(low) + [1]
        if not _has_factor(coeffs, p):
            return list(low)
    raise InputError(f"no irreducible polynomial of degree {e} over GF({p})")


def _has_factor(f, p):
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            g = list(low) + [1]
            if _polyrem(f, g, p) == [0] * d:
                return True
    return False


def _polyrem(f, g, p):
    r = list(f)
    dg = len(g) - 1
    for d in range(len(r) - 1, dg - 1, -1):
        c = r[d]
        if c:
            for i in range(dg + 1):
                r[d - dg + i] = (r[d - dg + i] - c * g[i]) % p
    return r[:dg]


def psl2(q: int) -> PermGroup:
    """``PSL_2(q)`` for odd ``q`` acting on the ``q+1`` points of the projective line."""
    if q < 3 or q % 2 == 0:
        raise InputError("psl2(q) needs an odd prime power q >= 3")
    F = _Field(q)
    inf = q

    def act(m):
        (a, b), (c, d) = m
        img = []
        for x in range(q + 1):
            if x == inf:
                num, den = a, c
            else:
                num = F.add[F.mul[a][x]][b]
                den = F.add[F.mul[c][x]][d]
            img.append(inf if den == 0 else F.mul[num][F.inv[den]])
        return Perm(img)

    w = F.primitive
    gens = [act(((1, 1), (0, 1))),
            act(((w, 0), (0, F.inv[w]))),
            act(((0, F.neg[1]), (1, 0)))]
    return PermGroup(q + 1, gens)


def m11() -> PermGroup:
    return PermGroup(11, [Perm.parse("(1 2 3 4 5 6 7 8 9 10 11)", 11),
                          Perm.parse("(3 7 11 8)(4 10 5 6)", 11)])


# ---------------------------------------------------------------- named entries

def _psl2_order(q):
    return q * (q * q - 1) // 2


_FAMILIES = {
    "alt": (lambda n: alternating(n), lambda n: max(factorial(n) // 2, 1), 1),
    "sym": (lambda n: symmetric(n), lambda n: factorial(n), 1),
    "psl2": (lambda q: psl2(q), _psl2_order, 1),
    "dihedral": (lambda k: dihedral(k), lambda k: 2**k, 1),
    "semidihedral": (lambda k: semidihedral(k), lambda k: 2**k, 1),
    "quaternion": (lambda k: quaternion(k), lambda k: 2**k, 1),
    "cyclic": (lambda n: cyclic(n), lambda n: n, 1),
    "elemab": (lambda p, r: elem_abelian(p, r), lambda p, r: p**r, 2),
    "m11": (lambda: m11(), lambda: 7920, 0),
}


def from_selector(sel: str) -> CatalogEntry:
    """Parse ``alt:6``, ``psl2:9``, ``elemab:2:3``, ``m11`` or ``file:path``."""
    fam, _, rest = sel.partition(":")
    fam = fam.strip().lower()
    if fam == "file":
        text = Path(rest).read_text()
        G, p = parse_group_text(text)
        return CatalogEntry(sel, {"path": rest}, G, G.order, p)
    if fam not in _FAMILIES:
        raise InputError(f"unknown group family {fam!r}")
    ctor, order, arity = _FAMILIES[fam]
    args = [a for a in rest.split(":") if a] if rest else []
    if len(args) != arity:
        raise InputError(f"{fam} takes {arity} integer parameter(s)")
    try:
        iargs = [int(a) for a in args]
    except ValueError:
        raise InputError(f"bad parameters in {sel!r}") from None
    G = ctor(*iargs)
    e = CatalogEntry(sel, dict(zip(("a", "b"), iargs)), G, order(*iargs))
    if not e.check():
        raise InputError(f"{sel}: constructed order {G.order} != {e.expected_order}")
    return e


# (selector, prime) pairs used by the tests and the catalog command
STANDARD = [
    ("dihedral:3", 2), ("dihedral:4", 2), ("quaternion:3", 2), ("semidihedral:4", 2),
    ("elemab:2:2", 2), ("elemab:3:2", 3), ("cyclic:4", 2),
    ("sym:3", 3), ("sym:4", 2), ("alt:4", 2), ("alt:5", 2), ("alt:6", 2),
    ("psl2:7", 2), ("psl2:9", 2), ("m11", 2), ("alt:8", 2), ("alt:9", 3), ("alt:11", 3),
]


def standard_entries():
    return [(from_selector(s), p) for s, p in STANDARD]
