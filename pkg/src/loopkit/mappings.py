"""Permutations of loop elements, translations, inner mappings and their groups.

Mappings act on the right, as in operator notation: ``apply(y, compose(p, q))``
is ``apply(apply(y, p), q)``, so a product ``R(x)L(y)`` means "first R(x),
then L(y)" and formulas transcribe left to right.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .core import LoopTable, LoopError, inverse

DEFAULT_GROUP_CAP = 10_000_000


class GroupTooLargeError(LoopError):
    pass


@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return invert(self) ** (-k)
        out = Perm.identity(self.degree)
        for _ in range(k):
            out = compose(out, self)
        return out

    def __str__(self):
        return "p: " + " ".join(map(str, self.images))


def make_perm(images: Sequence[int]) -> Perm:
    images = tuple(int(v) for v in images)
    if sorted(images) != list(range(len(images))):
        raise LoopError("images do not form a permutation")
    return Perm(images)


def compose(p: Perm, *rest: Perm) -> Perm:
    """``p`` first, then each of ``rest`` in order."""
    out = p.images
    for q in rest:
        if len(q.images) != len(out):
            raise LoopError("degree mismatch")
        qi = q.images
        out = tuple(qi[v] for v in out)
    return Perm(out)


def invert(p: Perm) -> Perm:
    out = [0] * len(p.images)
    for i, v in enumerate(p.images):
        out[v] = i
    return Perm(tuple(out))


def apply(y: int, p: Perm) -> int:
    return p.images[y]


def conjugate(p: Perm, j: Perm) -> Perm:
    """``p^j = j^-1 p j``."""
    return compose(invert(j), p, j)


# ---------------------------------------------------------------------------
# translations and inner mappings


def trans_L(L: LoopTable, x: int) -> Perm:
    """``y -> x*y``."""
    return Perm(L.cells[x])


def trans_R(L: LoopTable, x: int) -> Perm:
    """``y -> y*x``."""
    return Perm(tuple(row[x] for row in L.cells))


def _trans_L_inv(L: LoopTable, x: int) -> Perm:
    return Perm(L._ldiv[x])


def _trans_R_inv(L: LoopTable, x: int) -> Perm:
    return Perm(L._rdiv[x])


def j_map(L: LoopTable) -> Perm:
    return Perm(tuple(inverse(L, x) for x in range(L.n)))


def inner_T(L: LoopTable, x: int) -> Perm:
    """``T(x) = R(x) L(x)^-1``."""
    return compose(trans_R(L, x), _trans_L_inv(L, x))


def inner_R(L: LoopTable, x: int, y: int) -> Perm:
    """``R(x,y) = R(x) R(y) R(xy)^-1``."""
    return compose(trans_R(L, x), trans_R(L, y), _trans_R_inv(L, L.cells[x][y]))


def inner_L(L: LoopTable, x: int, y: int) -> Perm:
    """``L(x,y) = L(x) L(y) L(yx)^-1``."""
    return compose(trans_L(L, x), trans_L(L, y), _trans_L_inv(L, L.cells[y][x]))


def inner_C(L: LoopTable, x: int, y: int) -> Perm:
    """``C(x,y) = R(x) L(y) R(x^-1) L(y^-1)``."""
    xi, yi = inverse(L, x), inverse(L, y)
    return compose(trans_R(L, x), trans_L(L, y), trans_R(L, xi), trans_L(L, yi))


def inner_generators(L: LoopTable) -> list[tuple[str, tuple[int, ...], Perm]]:
    """Labelled generators ``L(x,y)``, ``R(x,y)``, ``T(x)`` of the inner mapping group.

    Pairs with ``x`` or ``y`` equal to 0 are skipped; those mappings are trivial.
    """
    out = []
    for x in range(1, L.n):
        out.append(("T", (x,), inner_T(L, x)))
    for x in range(1, L.n):
        for y in range(1, L.n):
            out.append(("L", (x, y), inner_L(L, x, y)))
            out.append(("R", (x, y), inner_R(L, x, y)))
    return out


def describe_mapping(kind: str, args: tuple[int, ...]) -> str:
    return f"{kind}({','.join(map(str, args))})"


# ---------------------------------------------------------------------------
# permutation groups


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Perm, ...]
    elements: frozenset[tuple[int, ...]]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p.images in self.elements

    def perms(self) -> list[Perm]:
        return [Perm(e) for e in sorted(self.elements)]

    def summary(self) -> str:
        return f"degree {self.degree}, {len(self.generators)} generators, order {self.order}"


def generate_group(gens: Iterable[Perm], cap: int = DEFAULT_GROUP_CAP, degree: int | None = None) -> PermGroup:
    """Breadth-first closure of ``gens`` under right multiplication by generators."""
    gens = list(gens)
    if not gens:
        if degree is None:
            raise LoopError("empty generator list")
        gens = [Perm.identity(degree)]
    n = gens[0].degree
    if any(g.degree != n for g in gens):
        raise LoopError("degree mismatch")
    # dedupe, drop identity; keep order for determinism
    seen_gens: dict[tuple[int, ...], None] = {}
    for g in gens:
        if not g.is_identity():
            seen_gens.setdefault(g.images, None)
    gimgs = list(seen_gens)
    ident = tuple(range(n))
    elements = {ident}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in gimgs:
            q = tuple(g[v] for v in p)
            if q not in elements:
                elements.add(q)
                if len(elements) > cap:
                    raise GroupTooLargeError(f"group too large (more than {cap} elements)")
                queue.append(q)
    return PermGroup(n, tuple(gens), frozenset(elements))


def multiplication_group(L: LoopTable, cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    gens = [trans_L(L, x) for x in range(L.n)] + [trans_R(L, x) for x in range(L.n)]
    return generate_group(gens, cap)


def inner_mapping_group(L: LoopTable, cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    gens = [g for _, _, g in inner_generators(L)]
    return generate_group(gens, cap, degree=L.n)


def stabilizer(G: PermGroup, point: int = 0) -> frozenset[tuple[int, ...]]:
    return frozenset(e for e in G.elements if e[point] == point)


# ---------------------------------------------------------------------------
# automorphisms


def automorphism_witness(L: LoopTable, p: Perm) -> tuple[int, int] | None:
    """A pair ``(a, b)`` with ``(ab)p != (ap)(bp)``, or None if ``p`` is an automorphism."""
    if p.degree != L.n:
        raise LoopError("degree mismatch")
    P = np.asarray(p.images, dtype=np.int64)
    T = L.array
    bad = np.argwhere(P[T] != T[np.ix_(P, P)])
    if len(bad):
        a, b = bad[0]
        return int(a), int(b)
    return None


def is_automorphism(L: LoopTable, p: Perm) -> bool:
    if p.images[0] != 0:
        return False
    return automorphism_witness(L, p) is None


def is_pseudo_automorphism(L: LoopTable, p: Perm, c: int) -> bool:
    """Whether ``xp * (yp * c) = (xy)p * c`` for all ``x, y``."""
    # imported here: properties depends on this module
    from .properties import has_inverse_property

    if not has_inverse_property(L):
        raise LoopError("requires inverse property loop")
    P = np.asarray(p.images, dtype=np.int64)
    T = L.array
    lhs = T[P[:, None], T[P, c][None, :]]
    rhs = T[P[T], c]
    return bool((lhs == rhs).all())


def automorphisms_of(L: LoopTable) -> list[Perm]:
    """All automorphisms, by extending partial maps; practical for small orders."""
    n = L.n
    out = []
    T = L.cells

    def extend(phi: list[int], used: set[int]) -> None:
        # propagate forced images
        changed = True
        while changed:
            changed = False
            known = [a for a in range(n) if phi[a] >= 0]
            for a in known:
                for b in known:
                    c = T[a][b]
                    v = T[phi[a]][phi[b]]
                    if phi[c] < 0:
                        if v in used:
                            return
                        phi[c] = v
                        used.add(v)
                        changed = True
                    elif phi[c] != v:
                        return
        free = [a for a in range(n) if phi[a] < 0]
        if not free:
            out.append(Perm(tuple(phi)))
            return
        a = free[0]
        for v in range(n):
            if v not in used:
                extend(phi[:a] + [v] + phi[a + 1:], used | {v})

    phi0 = [-1] * n
    phi0[0] = 0
    extend(phi0, {0})
    return out


def product(perms: Sequence[Perm], n: int) -> Perm:
    return reduce(compose, perms, Perm.identity(n))
