"""Permutations on {0, ..., n-1}, printed and parsed in 1-based cycle notation."""

from __future__ import annotations

import re
from math import lcm

from .errors import InputError

_CYCLE = re.compile(r"\(([^()]*)\)")


class Perm(tuple):
    """A permutation stored as its tuple of images.

    Composition follows function composition: ``(a * b)(x) == a(b(x))``.
    """

    __slots__ = ()

    def __new__(cls, images=()):
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @classmethod
    def from_images(cls, images) -> "Perm":
        p = cls(images)
        if sorted(p) != list(range(len(p))):
            raise InputError(f"not a bijection: {list(images)}")
        return p

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Perm":
        img = list(range(n))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 0 <= a < n:
                    raise InputError(f"point {a + 1} outside 1..{n}")
                if a in seen:
                    raise InputError(f"point {a + 1} repeated in cycles")
                seen.add(a)
            for i, a in enumerate(cyc):
                img[a] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    @classmethod
    def parse(cls, text: str, n: int) -> "Perm":
        """Parse 1-based cycle notation such as ``(1 2 3)(4 5)``."""
        s = text.strip()
        if s in ("", "()", "id", "1"):
            return cls.identity(n)
        if _CYCLE.sub("", s).strip(" \t,"):
            raise InputError(f"cannot parse permutation {text!r}")
        cycles = []
        for body in _CYCLE.findall(s):
            toks = body.replace(",", " ").split()
            try:
                cyc = [int(t) - 1 for t in toks]
            except ValueError:
                raise InputError(f"cannot parse permutation {text!r}") from None
            if cyc:
                cycles.append(cyc)
        return cls.from_cycles(n, cycles)

    @property
    def degree(self) -> int:
        return len(self)

    def __call__(self, x: int) -> int:
        return self[x]

    def __mul__(self, other):
        return Perm(map(self.__getitem__, other))

    def __rmul__(self, other):
        return NotImplemented

    def __invert__(self) -> "Perm":
        return self.inverse()

    def inverse(self) -> "Perm":
        inv = [0] * len(self)
        for i, x in enumerate(self):
            inv[x] = i
        return Perm(inv)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(len(self))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self)
        out = []
        for i in range(len(self)):
            if seen[i] or self[i] == i:
                seen[i] = True
                continue
            cyc = [i]
            seen[i] = True
            j = self[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self[j]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self) if i != x]

    def conj(self, x: "Perm") -> "Perm":
        """Return ``self * x * self**-1``."""
        img = [0] * len(self)
        for i, xi in enumerate(x):
            img[self[i]] = self[xi]
        return Perm(img)

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(a + 1) for a in c) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Perm({self})"


def parse_perm(text: str, n: int) -> Perm:
    return Perm.parse(text, n)


def perms_from_strings(texts, n: int) -> list[Perm]:
    return [Perm.parse(t, n) for t in texts]
