"""Cayley tables of finite loops.

A loop of order ``n`` lives on the elements ``0 .. n-1`` with ``0`` as the
two-sided identity.  Tables that arrive with the identity elsewhere are
relabeled by swapping that element with ``0``; the swap is kept in
``LoopTable.origin_relabeling`` so reports can refer back to the input labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 64


class LoopError(ValueError):
    """Base class for malformed or unsuitable tables."""


class TableParseError(LoopError):
    pass


class NotALoopError(LoopError):
    pass


class InverseUndefinedError(LoopError):
    def __init__(self, x: int):
        super().__init__(f"two-sided inverse undefined for element {x}")
        self.element = x


class NotClosedError(LoopError):
    pass


@dataclass(frozen=True)
class RawTable:
    n: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise TableParseError("order must be positive")
        if len(self.cells) != self.n or any(len(r) != self.n for r in self.cells):
            raise TableParseError("table is not square")
        for i, row in enumerate(self.cells):
            for j, v in enumerate(row):
                if not 0 <= v < self.n:
                    raise TableParseError(f"cell ({i},{j}) = {v} out of range [0, {self.n})")


@dataclass(frozen=True, eq=False)
class LoopTable:
    """A validated loop table with identity element 0.

    Build these through :func:`validate_loop` (or the fixture constructors);
    the constructor trusts its input.
    """

    n: int
    cells: tuple[tuple[int, ...], ...]
    origin_relabeling: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.origin_relabeling:
            object.__setattr__(self, "origin_relabeling", tuple(range(self.n)))
        n = self.n
        ldiv = [[0] * n for _ in range(n)]
        rdiv = [[0] * n for _ in range(n)]
        for a, row in enumerate(self.cells):
            for b, c in enumerate(row):
                ldiv[a][c] = b
                rdiv[b][c] = a
        object.__setattr__(self, "_ldiv", tuple(map(tuple, ldiv)))
        object.__setattr__(self, "_rdiv", tuple(map(tuple, rdiv)))

    def __eq__(self, other):
        return isinstance(other, LoopTable) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def __repr__(self):
        return f"LoopTable(n={self.n})"

    def __len__(self):
        return self.n

    @property
    def elements(self) -> range:
        return range(self.n)

    def mul(self, a: int, b: int) -> int:
        return self.cells[a][b]

    def left_div(self, a: int, b: int) -> int:
        return self._ldiv[a][b]

    def right_div(self, a: int, b: int) -> int:
        return self._rdiv[a][b]

    @cached_property
    def array(self) -> np.ndarray:
        """The table as an ``int64`` array (read-only)."""
        arr = np.array(self.cells, dtype=np.int64).reshape(self.n, self.n)
        arr.setflags(write=False)
        return arr

    @cached_property
    def left_div_array(self) -> np.ndarray:
        arr = np.array(self._ldiv, dtype=np.int64).reshape(self.n, self.n)
        arr.setflags(write=False)
        return arr

    @cached_property
    def right_div_array(self) -> np.ndarray:
        arr = np.array(self._rdiv, dtype=np.int64).reshape(self.n, self.n)
        arr.setflags(write=False)
        return arr

    def flat(self) -> list[int]:
        return [v for row in self.cells for v in row]


@dataclass(frozen=True)
class ElementSubset:
    """A subset of the elements of a loop of order ``n``."""

    n: int
    members: frozenset[int]

    @classmethod
    def of(cls, L: LoopTable, items: Iterable[int] = ()) -> "ElementSubset":
        members = frozenset(items)
        if any(not 0 <= x < L.n for x in members):
            raise LoopError("subset element out of range")
        return cls(L.n, members)

    def __contains__(self, x) -> bool:
        return x in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def flags(self) -> list[bool]:
        return [x in self.members for x in range(self.n)]


# ---------------------------------------------------------------------------
# text format


def parse_table(text: str) -> RawTable:
    """Parse the Cayley-table text format.

    The first non-comment line holds the order ``n``; the next ``n`` lines hold
    the rows.  Lines starting with ``#`` and blank lines are skipped.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TableParseError("missing order line")
    try:
        n = int(lines[0])
    except ValueError:
        raise TableParseError(f"missing order line (got {lines[0]!r})") from None
    if n < 1:
        raise TableParseError("order must be positive")
    if n > MAX_ORDER:
        raise TableParseError(f"order {n} exceeds cap {MAX_ORDER}")
    body = lines[1:]
    if len(body) != n:
        raise TableParseError(f"expected {n} rows, got {len(body)}")
    rows = []
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != n:
            raise TableParseError(f"ragged row {i}: expected {n} cells, got {len(toks)}")
        try:
            row = tuple(int(t) for t in toks)
        except ValueError:
            raise TableParseError(f"non-integer token in row {i}") from None
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise TableParseError(f"cell ({i},{j}) = {v} out of range [0, {n})")
        rows.append(row)
    return RawTable(n, tuple(rows))


def serialize_table(L: LoopTable | RawTable) -> str:
    width = len(str(L.n - 1))
    out = [str(L.n)]
    for row in L.cells:
        out.append(" ".join(str(v).rjust(width) for v in row))
    return "\n".join(out) + "\n"


def read_loop(text: str) -> LoopTable:
    return validate_loop(parse_table(text))


def validate_loop(t: RawTable | Sequence[Sequence[int]]) -> LoopTable:
    """Check the Latin property and move the identity to element 0."""
    if not isinstance(t, RawTable):
        rows = tuple(tuple(int(v) for v in r) for r in t)
        t = RawTable(len(rows), rows)
    n = t.n
    full = set(range(n))
    for i, row in enumerate(t.cells):
        if set(row) != full:
            raise NotALoopError(f"row {i} repeats a value; not a quasigroup")
    for j in range(n):
        if {t.cells[i][j] for i in range(n)} != full:
            raise NotALoopError(f"column {j} repeats a value; not a quasigroup")
    ident = None
    for e in range(n):
        if all(t.cells[e][x] == x and t.cells[x][e] == x for x in range(n)):
            ident = e
            break
    if ident is None:
        raise NotALoopError("no two-sided identity element")
    perm = list(range(n))
    perm[0], perm[ident] = perm[ident], perm[0]
    if ident == 0:
        return LoopTable(n, t.cells)
    return LoopTable(n, _relabel_cells(t.cells, perm), tuple(perm))


def _relabel_cells(cells, phi: Sequence[int]):
    """Table of the same operation after renaming each element ``a`` to ``phi[a]``."""
    n = len(cells)
    new = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            new[phi[a]][phi[b]] = phi[cells[a][b]]
    return tuple(map(tuple, new))


def relabel(L: LoopTable, phi: Sequence[int]) -> LoopTable:
    """Isomorphic copy of ``L`` in which element ``a`` is called ``phi[a]``.

    ``phi`` must fix 0.
    """
    if phi[0] != 0 or sorted(phi) != list(range(L.n)):
        raise LoopError("relabeling must be a permutation fixing 0")
    return LoopTable(L.n, _relabel_cells(L.cells, phi))


# ---------------------------------------------------------------------------
# arithmetic


def mul(L: LoopTable, a: int, b: int) -> int:
    return L.cells[a][b]


def left_div(L: LoopTable, a: int, b: int) -> int:
    """The unique ``x`` with ``a*x = b``."""
    return L._ldiv[a][b]


def right_div(L: LoopTable, a: int, b: int) -> int:
    """The unique ``y`` with ``y*a = b``."""
    return L._rdiv[a][b]


def left_inverse(L: LoopTable, x: int) -> int:
    return L._rdiv[x][0]


def right_inverse(L: LoopTable, x: int) -> int:
    return L._ldiv[x][0]


def inverse(L: LoopTable, x: int) -> int:
    li, ri = L._rdiv[x][0], L._ldiv[x][0]
    if li != ri:
        raise InverseUndefinedError(x)
    return li


def has_two_sided_inverses(L: LoopTable) -> bool:
    return all(L._rdiv[x][0] == L._ldiv[x][0] for x in range(L.n))


def power(L: LoopTable, x: int, k: int, right: bool = False) -> int:
    """``x**k`` with left bracketing ``((x*x)*x)...``.

    ``right=True`` brackets the other way, ``x*(x*(x...))``; the two agree in
    power-associative loops.  Negative ``k`` powers the two-sided inverse.
    """
    if k < 0:
        x = inverse(L, x)
        k = -k
    acc = 0
    cells = L.cells
    for _ in range(k):
        acc = cells[x][acc] if right else cells[acc][x]
    return acc


def subloop_generated(L: LoopTable, S: ElementSubset | Iterable[int]) -> ElementSubset:
    """Smallest subset containing ``S`` and 0 closed under product and both divisions."""
    members = set(S.members if isinstance(S, ElementSubset) else S)
    members.add(0)
    cells, ld, rd = L.cells, L._ldiv, L._rdiv
    frontier = list(members)
    current = list(members)
    while frontier:
        new = []
        for a in frontier:
            for b in current:
                for c in (cells[a][b], cells[b][a], ld[a][b], ld[b][a], rd[a][b], rd[b][a]):
                    if c not in members:
                        members.add(c)
                        new.append(c)
        current.extend(new)
        frontier = new
    return ElementSubset(L.n, frozenset(members))


def is_associative_on(L: LoopTable, S: ElementSubset | Iterable[int] | None = None) -> bool:
    return associativity_witness(L, S) is None


def associativity_witness(L: LoopTable, S=None) -> tuple[int, int, int] | None:
    """First triple of ``S`` with ``(ab)c != a(bc)``, or None."""
    if S is None:
        elems = np.arange(L.n)
    else:
        members = S.members if isinstance(S, ElementSubset) else frozenset(S)
        elems = np.array(sorted(members), dtype=np.int64)
        mask = np.zeros(L.n, dtype=bool)
        mask[elems] = True
        if not mask[L.array[np.ix_(elems, elems)]].all():
            raise NotClosedError("subset not closed under the product")
    T = L.array
    sub = T[np.ix_(elems, elems)]  # ab
    lhs = T[sub[:, :, None], elems[None, None, :]]  # (ab)c
    rhs = T[elems[:, None, None], sub[None, :, :]]  # a(bc): sub[b, c]
    bad = np.argwhere(lhs != rhs)
    if len(bad) == 0:
        return None
    i, j, k = bad[0]
    return int(elems[i]), int(elems[j]), int(elems[k])


def principal_isotope(L: LoopTable, a: int, b: int) -> LoopTable:
    """Loop ``x o y = (x/b)(a\\y)`` with identity ``a*b``, normalized to 0."""
    n = L.n
    rows = tuple(
        tuple(L.cells[L._rdiv[b][x]][L._ldiv[a][y]] for y in range(n)) for x in range(n)
    )
    return validate_loop(RawTable(n, rows))


# ---------------------------------------------------------------------------
# fixtures


def cyclic_group(n: int) -> LoopTable:
    return LoopTable(n, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def direct_product(L1: LoopTable, L2: LoopTable) -> LoopTable:
    """Product loop; the pair ``(a, b)`` is element ``a * |L2| + b``."""
    m = L2.n
    n = L1.n * m
    rows = []
    for x in range(n):
        a, b = divmod(x, m)
        rows.append(tuple(L1.cells[a][y // m] * m + L2.cells[b][y % m] for y in range(n)))
    return LoopTable(n, tuple(rows))


def klein_group() -> LoopTable:
    return direct_product(cyclic_group(2), cyclic_group(2))


def group_from_permutations(perms: Sequence[Sequence[int]]) -> LoopTable:
    """Cayley table of a list of permutations closed under composition.

    The identity permutation must come first.  Product ``p*q`` applies ``p``
    then ``q``.
    """
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    if perms[0] != tuple(range(len(perms[0]))):
        raise LoopError("identity permutation must be listed first")
    rows = []
    for p in perms:
        row = []
        for q in perms:
            pq = tuple(q[p[i]] for i in range(len(p)))
            if pq not in index:
                raise LoopError("permutation list not closed under composition")
            row.append(index[pq])
        rows.append(tuple(row))
    return validate_loop(RawTable(len(perms), tuple(rows)))


def symmetric_group(k: int) -> LoopTable:
    return group_from_permutations(sorted(itertools.permutations(range(k))))


def dihedral_group(m: int) -> LoopTable:
    """Symmetries of the regular ``m``-gon, order ``2m``."""
    rots = [tuple((i + r) % m for i in range(m)) for r in range(m)]
    refl = [tuple((r - i) % m for i in range(m)) for r in range(m)]
    return group_from_permutations(rots + refl)


def quaternion_group() -> LoopTable:
    # elements +-1, +-i, +-j, +-k encoded as sign * unit; unit 0..3 = 1,i,j,k
    units = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
             (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
             (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
             (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}
    elems = [(s, u) for u in range(4) for s in (1, -1)]
    index = {e: i for i, e in enumerate(elems)}
    rows = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = units[(u1, u2)]
            row.append(index[(s * s1 * s2, u)])
        rows.append(tuple(row))
    return validate_loop(RawTable(8, tuple(rows)))


def dicyclic_group(m: int) -> LoopTable:
    """Dicyclic group of order ``4m``: ``<a, x | a^2m = 1, x^2 = a^m, x^-1 a x = a^-1>``."""
    N = 2 * m
    # element (k, s) = a^k x^s, index k + N*s
    def prod(e, f):
        k1, s1 = e
        k2, s2 = f
        if s1 == 0:
            return ((k1 + k2) % N, s2)
        if s2 == 0:
            return ((k1 - k2) % N, 1)
        return ((k1 - k2 + m) % N, 0)
    elems = [(k, s) for s in (0, 1) for k in range(N)]
    index = {e: i for i, e in enumerate(elems)}
    rows = tuple(tuple(index[prod(e, f)] for f in elems) for e in elems)
    return validate_loop(RawTable(len(elems), rows))


def alternating_group(k: int) -> LoopTable:
    def even(p):
        inv = sum(1 for i in range(k) for j in range(i + 1, k) if p[i] > p[j])
        return inv % 2 == 0
    return group_from_permutations([p for p in sorted(itertools.permutations(range(k))) if even(p)])


def chein_double(G: LoopTable) -> LoopTable:
    """The Moufang loop ``M(G, 2)`` on ``G x {0, 1}``; ``(g, s)`` is ``g + s|G|``."""
    if not is_associative_on(G):
        raise LoopError("chein_double requires a group")
    m = G.n
    inv = [inverse(G, g) for g in range(m)]
    g_mul = G.cells
    rows = []
    for x in range(2 * m):
        g, s = x % m, x // m
        row = []
        for y in range(2 * m):
            h, t = y % m, y // m
            if s == 0 and t == 0:
                row.append(g_mul[g][h])
            elif s == 0:
                row.append(g_mul[h][g] + m)
            elif t == 0:
                row.append(g_mul[g][inv[h]] + m)
            else:
                row.append(g_mul[inv[h]][g])
        rows.append(tuple(row))
    return validate_loop(RawTable(2 * m, tuple(rows)))


def group_fixtures(max_order: int = 16) -> dict[str, LoopTable]:
    """Named group tables of order at most ``max_order``."""
    out: dict[str, LoopTable] = {}
    for k in range(1, max_order + 1):
        out[f"Z{k}"] = cyclic_group(k)
    cands = {
        "Klein": klein_group,
        "S3": lambda: symmetric_group(3),
        "D4": lambda: dihedral_group(4),
        "Q8": quaternion_group,
        "D5": lambda: dihedral_group(5),
        "D6": lambda: dihedral_group(6),
        "Dic3": lambda: dicyclic_group(3),
        "A4": lambda: alternating_group(4),
        "D7": lambda: dihedral_group(7),
        "D8": lambda: dihedral_group(8),
        "Q16": lambda: dicyclic_group(4),
        "Z2xZ4": lambda: direct_product(cyclic_group(2), cyclic_group(4)),
        "Z2^3": lambda: direct_product(klein_group(), cyclic_group(2)),
        "Z3xZ3": lambda: direct_product(cyclic_group(3), cyclic_group(3)),
        "Z2xZ6": lambda: direct_product(cyclic_group(2), cyclic_group(6)),
        "Z2xS3": lambda: direct_product(cyclic_group(2), symmetric_group(3)),
        "Z2xZ8": lambda: direct_product(cyclic_group(2), cyclic_group(8)),
        "Z4xZ4": lambda: direct_product(cyclic_group(4), cyclic_group(4)),
        "Z2xZ2xZ4": lambda: direct_product(klein_group(), cyclic_group(4)),
        "Z2^4": lambda: direct_product(klein_group(), klein_group()),
        "Z2xD4": lambda: direct_product(cyclic_group(2), dihedral_group(4)),
        "Z2xQ8": lambda: direct_product(cyclic_group(2), quaternion_group()),
        "Z3xS3": lambda: direct_product(cyclic_group(3), symmetric_group(3)),
    }
    orders = {"Klein": 4, "S3": 6, "D4": 8, "Q8": 8, "D5": 10, "D6": 12, "Dic3": 12,
              "A4": 12, "D7": 14, "D8": 16, "Q16": 16, "Z2xZ4": 8, "Z2^3": 8,
              "Z3xZ3": 9, "Z2xZ6": 12, "Z2xS3": 12, "Z2xZ8": 16, "Z4xZ4": 16,
              "Z2xZ2xZ4": 16, "Z2^4": 16, "Z2xD4": 16, "Z2xQ8": 16, "Z3xS3": 18}
    for name, make in cands.items():
        if orders[name] <= max_order:
            out[name] = make()
    return out
