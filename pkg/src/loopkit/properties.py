"""Loop properties, nucleus and quotients, and the inner-mapping identity suite.

Predicates come in pairs: ``*_witness(L)`` returns None when the property
holds and otherwise a small tuple that exhibits the failure; ``is_*(L)`` is
the boolean.  Witnesses can be re-checked with :func:`recheck_witness`, which
uses plain scalar arithmetic rather than the vectorized scans used here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .core import (
    ElementSubset,
    LoopError,
    LoopTable,
    associativity_witness,
    inverse,
    power,
    subloop_generated,
    validate_loop,
    RawTable,
)
from .mappings import (
    Perm,
    compose,
    conjugate,
    invert,
    j_map,
    trans_L,
    trans_R,
)


class NotASubloopError(LoopError):
    pass


class NotNormalError(LoopError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class QuotientError(LoopError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


def _first(mask: np.ndarray) -> tuple[int, ...] | None:
    bad = np.argwhere(mask)
    if len(bad) == 0:
        return None
    return tuple(int(v) for v in bad[0])


# ---------------------------------------------------------------------------
# equational properties


def moufang_witness(L: LoopTable) -> tuple[int, int, int] | None:
    """``(x, y, z)`` with ``x(y(xz)) != ((xy)x)z``."""
    T = L.array
    n = L.n
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    lhs = T[x, T[y, T[x, z]]]
    rhs = T[T[T[x, y], x], z]
    return _first(lhs != rhs)


def is_moufang(L: LoopTable) -> bool:
    return moufang_witness(L) is None


def commutative_witness(L: LoopTable):
    return _first(L.array != L.array.T)


def is_commutative(L: LoopTable) -> bool:
    return commutative_witness(L) is None


def is_group(L: LoopTable) -> bool:
    return associativity_witness(L) is None


def inverse_property_witness(L: LoopTable):
    """``("no inverse", x)``, ``("left", x, y)`` or ``("right", x, y)``."""
    for x in range(L.n):
        if L._rdiv[x][0] != L._ldiv[x][0]:
            return ("no inverse", x)
    T = L.array
    J = np.array([L._ldiv[x][0] for x in range(L.n)])
    idx = np.arange(L.n)
    left = T[J[:, None], T] != idx[None, :]  # x^-1 (x y) = y
    w = _first(left)
    if w:
        return ("left",) + w
    right = T[T, J[None, :]] != idx[:, None]  # (x y) y^-1 = x
    w = _first(right)
    if w:
        return ("right",) + w
    return None


def has_inverse_property(L: LoopTable) -> bool:
    return inverse_property_witness(L) is None


def left_alternative_witness(L: LoopTable):
    T = L.array
    sq = np.diag(T)
    return _first(T[np.arange(L.n)[:, None], T] != T[sq[:, None], np.arange(L.n)[None, :]])


def right_alternative_witness(L: LoopTable):
    T = L.array
    sq = np.diag(T)
    return _first(T[T, np.arange(L.n)[None, :]] != T[np.arange(L.n)[:, None], sq[None, :]])


def is_left_alternative(L: LoopTable) -> bool:
    return left_alternative_witness(L) is None


def is_right_alternative(L: LoopTable) -> bool:
    return right_alternative_witness(L) is None


def is_alternative(L: LoopTable) -> bool:
    return is_left_alternative(L) and is_right_alternative(L)


def power_associative_witness(L: LoopTable):
    """``(x, a, b, c)``: three elements of ``<x>`` that do not associate."""
    seen: set[frozenset[int]] = set()
    for x in range(L.n):
        S = subloop_generated(L, [x])
        if S.members in seen:
            continue
        seen.add(S.members)
        w = associativity_witness(L, S)
        if w:
            return (x,) + w
    return None


def is_power_associative(L: LoopTable) -> bool:
    return power_associative_witness(L) is None


def diassociative_witness(L: LoopTable):
    """``(x, y, a, b, c)``: three elements of ``<x, y>`` that do not associate."""
    if associativity_witness(L) is None:
        return None
    seen: set[frozenset[int]] = set()
    for x in range(L.n):
        for y in range(x, L.n):
            S = subloop_generated(L, [x, y])
            if S.members in seen:
                continue
            seen.add(S.members)
            w = associativity_witness(L, S)
            if w:
                return (x, y) + w
    return None


def is_diassociative(L: LoopTable) -> bool:
    return diassociative_witness(L) is None


def m4_witness(L: LoopTable):
    """``("not power associative", ...)`` or ``(x, y, z)`` violating the M4 identity."""
    pa = power_associative_witness(L)
    if pa:
        return ("not power associative",) + pa
    T = L.array
    n = L.n
    x4 = np.array([power(L, x, 4) for x in range(n)])
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    X4 = x4[x]
    lhs = T[T[x, y], T[z, X4]]
    rhs = T[T[x, T[y, z]], X4]
    return _first(lhs != rhs)


def is_m4(L: LoopTable) -> bool:
    return m4_witness(L) is None


# ---------------------------------------------------------------------------
# inner mappings as arrays


def inner_mapping_arrays(L: LoopTable) -> tuple[np.ndarray, list[tuple[str, tuple[int, ...]]]]:
    """All generators ``T(x)``, ``L(x,y)``, ``R(x,y)`` stacked as an ``(m, n)`` image array."""
    T, LD, RD = L.array, L.left_div_array, L.right_div_array
    n = L.n
    z = np.arange(n)
    ts = LD[z[:, None], T[z[None, :], z[:, None]]]  # T(x): z -> x \ (z x)
    x = z[:, None, None]
    y = z[None, :, None]
    w = z[None, None, :]
    ls = LD[T[y, x], T[y, T[x, w]]]  # L(x,y): w -> (yx) \ (y (x w))
    rs = RD[T[x, y], T[T[w, x], y]]  # R(x,y): w -> ((w x) y) / (xy)
    labels = [("T", (i,)) for i in range(n)]
    arrays = [ts]
    for i in range(n):
        for j in range(n):
            labels.append(("L", (i, j)))
            labels.append(("R", (i, j)))
    both = np.stack([ls, rs], axis=2).reshape(n * n * 2, n)
    arrays.append(both)
    return np.concatenate(arrays, axis=0), labels


def a_loop_witness(L: LoopTable):
    """``(kind, args, (a, b))``: an inner generator that is not an automorphism."""
    G, labels = inner_mapping_arrays(L)
    T = L.array
    bad = G[:, T] != T[G[:, :, None], G[:, None, :]]
    flags = bad.reshape(len(G), -1).any(axis=1)
    idx = np.flatnonzero(flags)
    if len(idx) == 0:
        return None
    g = int(idx[0])
    a, b = (int(v) for v in np.argwhere(bad[g])[0])
    kind, args = labels[g]
    return (kind, args, (a, b))


def is_a_loop(L: LoopTable) -> bool:
    return a_loop_witness(L) is None


# ---------------------------------------------------------------------------
# report


PROPERTY_NAMES = (
    "loop",
    "commutative",
    "group",
    "power_associative",
    "inverse_property",
    "left_alternative",
    "right_alternative",
    "diassociative",
    "moufang",
    "m4",
    "a_loop",
)

WITNESS_FUNCTIONS: dict[str, Callable[[LoopTable], Any]] = {
    "loop": lambda L: None,
    "commutative": commutative_witness,
    "group": associativity_witness,
    "power_associative": power_associative_witness,
    "inverse_property": inverse_property_witness,
    "left_alternative": left_alternative_witness,
    "right_alternative": right_alternative_witness,
    "diassociative": diassociative_witness,
    "moufang": moufang_witness,
    "m4": m4_witness,
    "a_loop": a_loop_witness,
}


def check_property(L: LoopTable, name: str) -> bool:
    try:
        fn = WITNESS_FUNCTIONS[name]
    except KeyError:
        raise LoopError(f"unknown property {name!r}") from None
    return fn(L) is None


@dataclass
class PropertyReport:
    verdicts: dict[str, bool]
    witnesses: dict[str, Any] = field(default_factory=dict)
    nucleus: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "properties": dict(self.verdicts),
            "witnesses": {k: _jsonable(v) for k, v in self.witnesses.items()},
            "nucleus": list(self.nucleus),
        }


def _jsonable(v):
    if isinstance(v, (tuple, list)):
        return [_jsonable(u) for u in v]
    if isinstance(v, Perm):
        return list(v.images)
    if isinstance(v, np.integer):
        return int(v)
    return v


def property_report(L: LoopTable) -> PropertyReport:
    verdicts, witnesses = {}, {}
    for name in PROPERTY_NAMES:
        w = WITNESS_FUNCTIONS[name](L)
        verdicts[name] = w is None
        if w is not None:
            witnesses[name] = w
    return PropertyReport(verdicts, witnesses, tuple(nucleus(L)))


def recheck_witness(L: LoopTable, name: str, w) -> bool:
    """True when ``w`` really exhibits a failure of property ``name``."""
    m = L.mul

    def assoc_fails(a, b, c):
        return m(m(a, b), c) != m(a, m(b, c))

    if name == "commutative":
        x, y = w
        return m(x, y) != m(y, x)
    if name == "group":
        return assoc_fails(*w)
    if name == "moufang":
        x, y, z = w
        return m(x, m(y, m(x, z))) != m(m(m(x, y), x), z)
    if name == "inverse_property":
        if w[0] == "no inverse":
            x = w[1]
            return L.left_div(x, 0) != L.right_div(x, 0)
        x, y = w[1], w[2]
        xi, yi = inverse(L, x), inverse(L, y)
        if w[0] == "left":
            return m(xi, m(x, y)) != y
        return m(m(x, y), yi) != x
    if name == "left_alternative":
        x, y = w
        return m(x, m(x, y)) != m(m(x, x), y)
    if name == "right_alternative":
        x, y = w
        return m(m(x, y), y) != m(x, m(y, y))
    if name == "power_associative":
        x, a, b, c = w
        return {a, b, c} <= subloop_generated(L, [x]).members and assoc_fails(a, b, c)
    if name == "diassociative":
        x, y, a, b, c = w
        return {a, b, c} <= subloop_generated(L, [x, y]).members and assoc_fails(a, b, c)
    if name == "m4":
        if w[0] == "not power associative":
            return recheck_witness(L, "power_associative", w[1:])
        x, y, z = w
        x4 = power(L, x, 4)
        return m(m(x, y), m(z, x4)) != m(m(x, m(y, z)), x4)
    if name == "a_loop":
        kind, args, (a, b) = w
        from . import mappings

        p = {"T": mappings.inner_T, "L": mappings.inner_L, "R": mappings.inner_R}[kind](L, *args)
        return p.images[m(a, b)] != m(p.images[a], p.images[b])
    raise LoopError(f"unknown property {name!r}")


# ---------------------------------------------------------------------------
# nucleus and quotients


def nuclei(L: LoopTable) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """Left, middle and right nuclei."""
    T = L.array
    n = L.n
    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    ok = T[T[x, y], z] == T[x, T[y, z]]
    left = frozenset(int(i) for i in np.flatnonzero(ok.all(axis=(1, 2))))
    middle = frozenset(int(i) for i in np.flatnonzero(ok.all(axis=(0, 2))))
    right = frozenset(int(i) for i in np.flatnonzero(ok.all(axis=(0, 1))))
    return left, middle, right


def nucleus(L: LoopTable) -> ElementSubset:
    left, middle, right = nuclei(L)
    return ElementSubset(L.n, left & middle & right)


def is_subloop(L: LoopTable, H: ElementSubset) -> bool:
    if 0 not in H.members:
        return False
    return subloop_generated(L, H).members == H.members


def normality_witness(L: LoopTable, H: ElementSubset):
    """``(kind, args, h)``: an inner generator moving ``h`` out of ``H``."""
    if not is_subloop(L, H):
        raise NotASubloopError("not a subloop")
    G, labels = inner_mapping_arrays(L)
    mask = np.zeros(L.n, dtype=bool)
    mask[list(H.members)] = True
    members = np.array(sorted(H.members))
    escapes = ~mask[G[:, members]]
    w = _first(escapes)
    if w is None:
        return None
    g, i = w
    kind, args = labels[g]
    return (kind, args, int(members[i]))


def is_normal_subloop(L: LoopTable, H: ElementSubset) -> bool:
    return normality_witness(L, H) is None


@dataclass(frozen=True)
class Quotient:
    table: LoopTable
    cosets: tuple[tuple[int, ...], ...]

    def coset_of(self, x: int) -> int:
        for i, c in enumerate(self.cosets):
            if x in c:
                return i
        raise LoopError(f"element {x} in no coset")


def quotient_with_cosets(L: LoopTable, H: ElementSubset) -> Quotient:
    w = normality_witness(L, H)
    if w is not None:
        raise NotNormalError("not normal", w)
    cosets = {frozenset(L.cells[x][h] for h in H.members) for x in range(L.n)}
    ordered = sorted((tuple(sorted(c)) for c in cosets), key=lambda c: c[0])
    label = [-1] * L.n
    for i, c in enumerate(ordered):
        for x in c:
            if label[x] != -1:
                raise QuotientError("cosets do not partition the loop", (x,))
            label[x] = i
    if -1 in label:
        raise QuotientError("cosets do not cover the loop", (label.index(-1),))
    m = len(ordered)
    rows = [[-1] * m for _ in range(m)]
    for x in range(L.n):
        for y in range(L.n):
            c = label[L.cells[x][y]]
            cell = rows[label[x]][label[y]]
            if cell == -1:
                rows[label[x]][label[y]] = c
            elif cell != c:
                raise QuotientError("product not well-defined", (x, y))
    table = validate_loop(RawTable(m, tuple(map(tuple, rows))))
    return Quotient(table, tuple(ordered))


def quotient(L: LoopTable, H: ElementSubset) -> LoopTable:
    return quotient_with_cosets(L, H).table


def commutator(L: LoopTable, x: int, y: int) -> int:
    """The ``c`` with ``(yx) c = xy``."""
    return L.left_div(L.mul(y, x), L.mul(x, y))


# ---------------------------------------------------------------------------
# the equivalence corollaries


def verify_corollary2(L: LoopTable) -> dict:
    """On A-loops: inverse property, alternative, diassociative and Moufang agree."""
    if not is_a_loop(L):
        return {"applicable": False}
    items = {
        "inverse_property": has_inverse_property(L),
        "alternative": is_alternative(L),
        "diassociative": is_diassociative(L),
        "moufang": is_moufang(L),
    }
    return {"applicable": True, **items, "equivalent": len(set(items.values())) == 1}


def verify_corollary4(L: LoopTable) -> dict:
    """Diassociative A-loop iff Moufang with ``L/Nuc`` commutative of exponent 3.

    When ``L`` is Moufang, the quotient conditions are also compared with
    "every cube and every commutator lies in the nucleus".
    """
    lhs = is_diassociative(L) and is_a_loop(L)
    moufang = is_moufang(L)
    out: dict[str, Any] = {"lhs": lhs, "moufang": moufang}
    N = nucleus(L)
    out["nucleus"] = sorted(N.members)
    if moufang:
        Q = quotient(L, N)
        comm = is_commutative(Q)
        exp3 = all(power(Q, c, 3) == 0 for c in range(Q.n))
        cubes = all(power(L, x, 3) in N.members for x in range(L.n))
        comms = all(commutator(L, x, y) in N.members for x in range(L.n) for y in range(L.n))
        out.update(
            quotient_order=Q.n,
            quotient_commutative=comm,
            quotient_exponent3=exp3,
            cubes_in_nucleus=cubes,
            commutators_in_nucleus=comms,
            reformulation_agrees=(comm == comms and exp3 == cubes),
        )
        rhs = comm and exp3
    else:
        rhs = False
        out["reformulation_agrees"] = True
    out["rhs"] = rhs
    out["equivalent"] = lhs == rhs
    return out


# ---------------------------------------------------------------------------
# identity suite

ANY_LOOP = "any-loop"
IP_LOOP = "IP-loop"
DA_LOOP = "diassociative-A-loop"
MOUFANG = "Moufang"


@dataclass
class IdentityResult:
    id: str
    hypothesis: str
    description: str
    applicable: bool
    holds: bool | None = None
    witness: tuple | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "hypothesis": self.hypothesis,
            "description": self.description,
            "applicable": self.applicable,
            "holds": self.holds,
            "witness": _jsonable(self.witness),
        }


@dataclass
class IdentitySuiteReport:
    hypotheses: dict[str, bool]
    results: list[IdentityResult]

    @property
    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if r.applicable and not r.holds]

    @property
    def ok(self) -> bool:
        return not self.failures

    def by_id(self) -> dict[str, IdentityResult]:
        return {r.id: r for r in self.results}

    def to_dict(self) -> dict:
        return {
            "hypotheses": dict(self.hypotheses),
            "results": [r.to_dict() for r in self.results],
            "ok": self.ok,
        }


class _Maps:
    """Translations and inner mappings of one loop, built on first use."""

    def __init__(self, L: LoopTable):
        self.L = L
        self.n = L.n
        self.inv = [inverse(L, x) for x in range(L.n)]
        self._cache: dict[tuple, Perm] = {}

    def _get(self, key, build):
        p = self._cache.get(key)
        if p is None:
            p = self._cache[key] = build()
        return p

    def R(self, x):
        return self._get(("R", x), lambda: trans_R(self.L, x))

    def Lt(self, x):
        return self._get(("L", x), lambda: trans_L(self.L, x))

    def Rinv(self, x):
        return self._get(("R-", x), lambda: invert(self.R(x)))

    def Linv(self, x):
        return self._get(("L-", x), lambda: invert(self.Lt(x)))

    def T(self, x):
        return self._get(("T", x), lambda: compose(self.R(x), self.Linv(x)))

    def Rxy(self, x, y):
        return self._get(("Rxy", x, y),
                         lambda: compose(self.R(x), self.R(y), self.Rinv(self.L.mul(x, y))))

    def Lxy(self, x, y):
        return self._get(("Lxy", x, y),
                         lambda: compose(self.Lt(x), self.Lt(y), self.Linv(self.L.mul(y, x))))

    def C(self, x, y):
        i = self.inv
        return self._get(("C", x, y),
                         lambda: compose(self.R(x), self.Lt(y), self.R(i[x]), self.Lt(i[y])))


def identity_suite(L: LoopTable) -> IdentitySuiteReport:
    """Check every operator identity that the loop's hypothesis class permits."""
    ip = has_inverse_property(L)
    moufang = is_moufang(L)
    da = ip and is_diassociative(L) and is_a_loop(L)
    hyps = {ANY_LOOP: True, IP_LOOP: ip, MOUFANG: moufang, DA_LOOP: da}
    results: list[IdentityResult] = []
    n = L.n
    E = range(n)
    M = _Maps(L) if ip else None
    ident = Perm.identity(n)

    def run(id_, hyp, desc, check):
        if not hyps[hyp]:
            results.append(IdentityResult(id_, hyp, desc, False))
            return
        w = check()
        results.append(IdentityResult(id_, hyp, desc, True, w is None, w))

    def pairs(pred):
        for x in E:
            for y in E:
                if not pred(x, y):
                    return (x, y)
        return None

    def triples(pred):
        for x in E:
            for y in E:
                for z in E:
                    if not pred(x, y, z):
                        return (x, y, z)
        return None

    m = L.mul
    i = M.inv if M else None

    # IP-loop: conjugation by J
    if ip:
        J = j_map(L)
    run("j_conjugation", IP_LOOP, "R(x)^J = L(x^-1), L(x)^J = R(x^-1), L(x,y)^J = R(x^-1,y^-1)",
        lambda: pairs(lambda x, y: conjugate(M.R(x), J) == M.Lt(i[x])
                      and conjugate(M.Lt(x), J) == M.R(i[x])
                      and conjugate(M.Lxy(x, y), J) == M.Rxy(i[x], i[y])))

    run("moufang_translation_law", MOUFANG, "R(xz)L(x) = R(x)L(x)R(z)",
        lambda: pairs(lambda x, z: compose(trans_R(L, m(x, z)), trans_L(L, x))
                      == compose(trans_R(L, x), trans_L(L, x), trans_R(L, z))))

    run("t_product_twisted", DA_LOOP, "[R(x,y)R(y,x)]^-1 T(x)T(y) = T(xy)",
        lambda: pairs(lambda x, y: compose(invert(compose(M.Rxy(x, y), M.Rxy(y, x))), M.T(x), M.T(y))
                      == M.T(m(x, y))))
    run("t_homomorphism", DA_LOOP, "T(x)T(y) = T(xy)",
        lambda: pairs(lambda x, y: compose(M.T(x), M.T(y)) == M.T(m(x, y))))
    run("l_as_r_of_inverses", DA_LOOP, "L(x,y) = R(x^-1,y^-1)",
        lambda: pairs(lambda x, y: M.Lxy(x, y) == M.Rxy(i[x], i[y])))
    run("r_inverse_swap", DA_LOOP, "R(x,y)^-1 = R(y^-1,x^-1)",
        lambda: pairs(lambda x, y: invert(M.Rxy(x, y)) == M.Rxy(i[y], i[x])))
    run("l_inverse_swap", DA_LOOP, "L(x,y)^-1 = L(y^-1,x^-1)",
        lambda: pairs(lambda x, y: invert(M.Lxy(x, y)) == M.Lxy(i[y], i[x])))
    run("t_conjugates_r", DA_LOOP, "R(y)T(x) = T(x)R(x^-1yx)",
        lambda: pairs(lambda x, y: compose(M.R(y), M.T(x)) == compose(M.T(x), M.R(m(m(i[x], y), x)))))
    run("t_conjugates_l", DA_LOOP, "L(y)T(x) = T(x)L(x^-1yx)",
        lambda: pairs(lambda x, y: compose(M.Lt(y), M.T(x)) == compose(M.T(x), M.Lt(m(m(i[x], y), x)))))
    run("c_fixes_identity", DA_LOOP, "C(x,y) = R(x)L(y)R(x^-1)L(y^-1) fixes the identity",
        lambda: pairs(lambda x, y: M.C(x, y).images[0] == 0))
    run("c_j_invariant", DA_LOOP, "C(x,y) = C(x,y)^J = L(x^-1)R(y^-1)L(x)R(y)",
        lambda: pairs(lambda x, y: conjugate(M.C(x, y), J) == M.C(x, y)
                      and M.C(x, y) == compose(M.Lt(i[x]), M.R(i[y]), M.Lt(x), M.R(y))))
    run("c_from_r", DA_LOOP, "C(x,y) = R(x,y)R(y,x)^-1",
        lambda: pairs(lambda x, y: M.C(x, y) == compose(M.Rxy(x, y), invert(M.Rxy(y, x)))))

    def subgroup_check(inner):
        def check():
            seen = set()
            for a in E:
                for b in range(a, n):
                    S = subloop_generated(L, [a, b]).members
                    if S in seen:
                        continue
                    seen.add(S)
                    for q in S:
                        for r in S:
                            g = inner(q, r)
                            for p in S:
                                if compose(M.R(p), g) != compose(g, M.R(p)) or \
                                        compose(M.Lt(p), g) != compose(g, M.Lt(p)):
                                    return (p, q, r)
            return None
        return check

    run("subgroup_commutes_r", DA_LOOP, "R(p), L(p) commute with R(q,r) for p,q,r in a subgroup", subgroup_check(M.Rxy if M else None))
    run("subgroup_commutes_l", DA_LOOP, "R(p), L(p) commute with L(q,r) for p,q,r in a subgroup", subgroup_check(M.Lxy if M else None))
    run("subgroup_commutes_c", DA_LOOP, "R(p), L(p) commute with C(q,r) for p,q,r in a subgroup", subgroup_check(M.C if M else None))
    run("r_factorization", DA_LOOP, "R(x,y) = R(y)R(y^-1x^-1)R(x) = R(y^-1x^-1)R(x)R(y)",
        lambda: pairs(lambda x, y: M.Rxy(x, y) == compose(M.R(y), M.R(m(i[y], i[x])), M.R(x))
                      == compose(M.R(m(i[y], i[x])), M.R(x), M.R(y))))
    run("l_factorization", DA_LOOP, "L(x,y) = L(y)L(x^-1y^-1)L(x) = L(x^-1y^-1)L(x)L(y)",
        lambda: pairs(lambda x, y: M.Lxy(x, y) == compose(M.Lt(y), M.Lt(m(i[x], i[y])), M.Lt(x))
                      == compose(M.Lt(m(i[x], i[y])), M.Lt(x), M.Lt(y))))
    run("r_inverse_transpose", DA_LOOP, "R(x,y)^-1 = R(y,x)",
        lambda: pairs(lambda x, y: invert(M.Rxy(x, y)) == M.Rxy(y, x)))
    run("r_l_coincide", DA_LOOP, "R(x,y) = R(x^-1,y^-1) = L(x,y) = L(x^-1,y^-1)",
        lambda: pairs(lambda x, y: M.Rxy(x, y) == M.Rxy(i[x], i[y]) == M.Lxy(x, y) == M.Lxy(i[x], i[y])))
    run("c_is_r_squared", DA_LOOP, "C(x,y) = C(x^-1,y^-1) = R(x,y)^2",
        lambda: pairs(lambda x, y: M.C(x, y) == M.C(i[x], i[y]) == compose(M.Rxy(x, y), M.Rxy(x, y))))
    run("c_orbit_swap", DA_LOOP, "(yx)C(z,y) = (yx)C(z^-1,x)",
        lambda: triples(lambda x, y, z: M.C(z, y).images[m(y, x)] == M.C(i[z], x).images[m(y, x)]))
    run("moufang_conclusion", DA_LOOP, "x(y(xz)) = ((xy)x)z",
        lambda: triples(lambda x, y, z: m(x, m(y, m(x, z))) == m(m(m(x, y), x), z)))
    run("c_order_three", DA_LOOP, "C(x,z) = L(z,x) = R(z,x) and C(x,z)^3 = I",
        lambda: pairs(lambda x, z: M.C(x, z) == M.Lxy(z, x) == M.Rxy(z, x)
                      and compose(M.C(x, z), M.C(x, z), M.C(x, z)) == ident))
    return IdentitySuiteReport(hyps, results)
