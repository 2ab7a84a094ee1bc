"""Isomorphism tests and canonical forms for loop tables."""

from __future__ import annotations

from collections import Counter

from . import kernels
from .core import LoopError, LoopTable

CANONICAL_CAP = 8


def _cycle_type(row: tuple[int, ...]) -> tuple[int, ...]:
    seen = [False] * len(row)
    lengths = []
    for s in range(len(row)):
        if not seen[s]:
            k, x = 0, s
            while not seen[x]:
                seen[x] = True
                x = row[x]
                k += 1
            lengths.append(k)
    return tuple(sorted(lengths))


def _element_order(L: LoopTable, x: int) -> int:
    acc, k = x, 1
    while acc != 0 and k <= L.n:
        acc = L.cells[acc][x]
        k += 1
    return k


def element_invariants(L: LoopTable) -> list[tuple]:
    """Per-element data preserved by isomorphisms.

    Cycle types of ``L(x)`` and ``R(x)``, the size of the commutant of ``x``,
    the left-bracketed order of ``x``, and whether ``x*x = 0``.
    """
    cols = list(zip(*L.cells))
    out = []
    for x in range(L.n):
        commutant = sum(1 for y in range(L.n) if L.cells[x][y] == L.cells[y][x])
        out.append((_cycle_type(L.cells[x]), _cycle_type(cols[x]), commutant,
                    _element_order(L, x), L.cells[x][x] == 0))
    return out


def find_isomorphism(L1: LoopTable, L2: LoopTable) -> list[int] | None:
    """A bijection ``phi`` with ``phi[ab] = phi[a] phi[b]``, or None."""
    if L1.n != L2.n:
        raise LoopError("order mismatch")
    n = L1.n
    inv1, inv2 = element_invariants(L1), element_invariants(L2)
    if Counter(inv1) != Counter(inv2):
        return None
    cands = [[y for y in range(n) if inv2[y] == inv1[x]] for x in range(n)]
    A, B = L1.cells, L2.cells

    def extend(phi: list[int], used: set[int]) -> list[int] | None:
        changed = True
        while changed:
            changed = False
            known = [a for a in range(n) if phi[a] >= 0]
            for a in known:
                for b in known:
                    c, v = A[a][b], B[phi[a]][phi[b]]
                    if phi[c] < 0:
                        if v in used or inv2[v] != inv1[c]:
                            return None
                        phi[c] = v
                        used.add(v)
                        changed = True
                    elif phi[c] != v:
                        return None
        free = [a for a in range(n) if phi[a] < 0]
        if not free:
            return phi
        a = min(free, key=lambda x: len(cands[x]))
        for v in cands[a]:
            if v not in used:
                got = extend(phi[:a] + [v] + phi[a + 1:], used | {v})
                if got is not None:
                    return got
        return None

    phi0 = [-1] * n
    phi0[0] = 0
    return extend(phi0, {0})


def are_isomorphic(L1: LoopTable, L2: LoopTable) -> bool:
    return find_isomorphism(L1, L2) is not None


def canonical_form(L: LoopTable, cap: int = CANONICAL_CAP, backend: str | None = None) -> LoopTable:
    """The lexicographically least table among all relabelings fixing 0."""
    if L.n > cap:
        raise LoopError(f"canonicalization cap: order {L.n} exceeds {cap}")
    flat = kernels.get_backend(backend).canonical_table(L.n, L.flat())
    n = L.n
    return LoopTable(n, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))


def canonical_key(L: LoopTable, cap: int = CANONICAL_CAP) -> tuple[tuple[int, ...], ...]:
    return canonical_form(L, cap).cells
