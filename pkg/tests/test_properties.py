"""Predicates checked against plain-loop reference implementations."""

import itertools

import pytest

from loopkit.core import (
    ElementSubset,
    LoopError,
    chein_double,
    cyclic_group,
    direct_product,
    group_fixtures,
    klein_group,
    power,
    quaternion_group,
    symmetric_group,
    validate_loop,
)
from loopkit.properties import (
    PROPERTY_NAMES,
    NotASubloopError,
    NotNormalError,
    check_property,
    commutator,
    identity_suite,
    is_a_loop,
    is_diassociative,
    is_moufang,
    is_normal_subloop,
    is_subloop,
    nuclei,
    nucleus,
    property_report,
    quotient,
    quotient_with_cosets,
    recheck_witness,
    verify_corollary2,
    verify_corollary4,
)
from loopkit.search import all_loops

M12 = chein_double(symmetric_group(3))


def small_corpus():
    out = []
    for n in range(1, 6):
        out.extend(all_loops(n))
    out.extend([M12, symmetric_group(3), quaternion_group(), klein_group(), cyclic_group(6)])
    return out


CORPUS = small_corpus()


# --- reference implementations -------------------------------------------------

def ref_assoc(L, S):
    m = L.mul
    return all(m(m(a, b), c) == m(a, m(b, c)) for a in S for b in S for c in S)


def ref_closure(L, gens):
    S = {0, *gens}
    while True:
        new = {f(a, b) for a in S for b in S
               for f in (L.mul, L.left_div, L.right_div)} - S
        if not new:
            return S
        S |= new


def ref_inverse(L, x):
    r = [y for y in range(L.n) if L.mul(x, y) == 0][0]
    l = [y for y in range(L.n) if L.mul(y, x) == 0][0]
    return r if r == l else None


def ref_property(L, name):
    n, m, E = L.n, L.mul, range(L.n)
    if name == "loop":
        return True
    if name == "commutative":
        return all(m(x, y) == m(y, x) for x in E for y in E)
    if name == "group":
        return ref_assoc(L, E)
    if name == "moufang":
        return all(m(x, m(y, m(x, z))) == m(m(m(x, y), x), z) for x in E for y in E for z in E)
    if name == "inverse_property":
        inv = [ref_inverse(L, x) for x in E]
        if None in inv:
            return False
        return all(m(inv[x], m(x, y)) == y and m(m(x, y), inv[y]) == x for x in E for y in E)
    if name == "left_alternative":
        return all(m(x, m(x, y)) == m(m(x, x), y) for x in E for y in E)
    if name == "right_alternative":
        return all(m(m(x, y), y) == m(x, m(y, y)) for x in E for y in E)
    if name == "power_associative":
        return all(ref_assoc(L, ref_closure(L, [x])) for x in E)
    if name == "diassociative":
        return all(ref_assoc(L, ref_closure(L, [x, y])) for x in E for y in E)
    if name == "m4":
        if not ref_property(L, "power_associative"):
            return False
        x4 = [m(m(m(x, x), x), x) for x in E]
        return all(m(m(x, y), m(z, x4[x])) == m(m(x, m(y, z)), x4[x])
                   for x in E for y in E for z in E)
    if name == "a_loop":
        return ref_a_loop(L)
    raise KeyError(name)


def ref_a_loop(L):
    """Every stabilizer element of the group generated by all translations is an automorphism."""
    n, m = L.n, L.mul
    gens = [tuple(m(x, y) for y in range(n)) for x in range(n)]
    gens += [tuple(m(y, x) for y in range(n)) for x in range(n)]
    seen = {tuple(range(n))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[i]] for i in range(n))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    for p in seen:
        if p[0] == 0:
            if any(p[m(a, b)] != m(p[a], p[b]) for a in range(n) for b in range(n)):
                return False
    return True


# --- tests -------------------------------------------------------------------------

@pytest.mark.parametrize("name", PROPERTY_NAMES)
def test_predicates_match_reference(name):
    for L in CORPUS:
        assert check_property(L, name) == ref_property(L, name), (name, L.cells)


def test_witnesses_are_genuine():
    for L in CORPUS:
        rep = property_report(L)
        for name, w in rep.witnesses.items():
            assert not rep.verdicts[name]
            if name != "loop":
                assert recheck_witness(L, name, w), (name, w)


def test_report_serializes():
    d = property_report(M12).to_dict()
    assert d["properties"]["moufang"] is True
    assert d["properties"]["a_loop"] is False
    assert d["nucleus"] == [0]
    assert d["witnesses"]["a_loop"][0] == "T"


def test_unknown_property():
    with pytest.raises(LoopError):
        check_property(M12, "flying")


def test_order_12_moufang_loop_is_not_an_a_loop():
    assert is_moufang(M12) and is_diassociative(M12)
    assert not is_a_loop(M12)


def test_nuclei():
    for L in CORPUS:
        E = range(L.n)
        m = L.mul
        nl = {a for a in E if all(m(m(a, x), y) == m(a, m(x, y)) for x in E for y in E)}
        nm = {a for a in E if all(m(m(x, a), y) == m(x, m(a, y)) for x in E for y in E)}
        nr = {a for a in E if all(m(m(x, y), a) == m(x, m(y, a)) for x in E for y in E)}
        assert nuclei(L) == (frozenset(nl), frozenset(nm), frozenset(nr))
        assert nucleus(L).members == frozenset(nl & nm & nr)


def test_quotients():
    Z6 = cyclic_group(6)
    Q = quotient_with_cosets(Z6, ElementSubset.of(Z6, [0, 2, 4]))
    assert Q.table.n == 2
    assert Q.cosets == ((0, 2, 4), (1, 3, 5))
    assert Q.coset_of(3) == 1
    # a group modulo its own nucleus is trivial
    for G in group_fixtures(12).values():
        assert quotient(G, nucleus(G)).n == 1
    # the order 12 Moufang loop has trivial nucleus
    assert quotient(M12, nucleus(M12)) == M12


def test_quotient_errors():
    S3 = symmetric_group(3)
    sub = next(ElementSubset.of(S3, [0, x]) for x in range(1, 6) if S3.mul(x, x) == 0)
    assert is_subloop(S3, sub)
    assert not is_normal_subloop(S3, sub)
    with pytest.raises(NotNormalError):
        quotient(S3, sub)
    not_closed = next(ElementSubset.of(S3, [0, x]) for x in range(1, 6) if S3.mul(x, x) != 0)
    assert not is_subloop(S3, not_closed)
    with pytest.raises(NotASubloopError):
        is_normal_subloop(S3, not_closed)


def test_commutator():
    S3 = symmetric_group(3)
    for x, y in itertools.product(range(6), repeat=2):
        c = commutator(S3, x, y)
        assert S3.mul(S3.mul(y, x), c) == S3.mul(x, y)
    assert all(commutator(cyclic_group(5), x, y) == 0 for x in range(5) for y in range(5))


def test_a_loop_equivalences():
    for L in CORPUS:
        r = verify_corollary2(L)
        assert r["applicable"] == is_a_loop(L)
        if r["applicable"]:
            assert r["equivalent"]


def test_nuclear_characterization_on_the_order_12_loop():
    r = verify_corollary4(M12)
    assert r["lhs"] is False and r["rhs"] is False
    assert r["equivalent"] and r["reformulation_agrees"]
    assert r["quotient_order"] == 12


def test_nuclear_characterization_on_corpus():
    for L in CORPUS:
        r = verify_corollary4(L)
        assert r["equivalent"] and r["reformulation_agrees"]


def test_identity_suite_on_groups():
    for name, G in group_fixtures(16).items():
        rep = identity_suite(G)
        assert rep.ok, (name, [r.id for r in rep.failures])
        assert all(r.applicable for r in rep.results)


def test_identity_suite_on_the_order_12_loop():
    rep = identity_suite(M12)
    assert rep.ok
    by_id = rep.by_id()
    assert by_id["j_conjugation"].holds and by_id["moufang_translation_law"].holds
    for id_ in ("t_product_twisted", "r_inverse_transpose", "c_is_r_squared", "c_orbit_swap", "c_order_three", "moufang_conclusion"):
        assert not by_id[id_].applicable
    # the identities that need the A-loop hypothesis really fail here
    from loopkit.mappings import Perm, inner_C
    ident = Perm.identity(12)
    assert any(inner_C(M12, x, y) ** 3 != ident for x in range(12) for y in range(12))


def test_identity_suite_detects_failures_when_forced():
    """A non-IP loop gets only the any-loop class; nothing is applicable beyond it."""
    L = next(L for L in all_loops(5) if not check_property(L, "inverse_property"))
    rep = identity_suite(L)
    assert rep.hypotheses["IP-loop"] is False
    assert rep.ok and not any(r.applicable for r in rep.results)
    d = rep.to_dict()
    assert d["ok"] is True and len(d["results"]) == len(rep.results)


def test_power_of_moufang_elements():
    # Moufang loops are power associative, so both bracketings agree
    for x in range(12):
        for k in range(6):
            assert power(M12, x, k) == power(M12, x, k, right=True)


def test_direct_product_properties():
    P = direct_product(M12, cyclic_group(2))
    assert P.n == 24
    assert is_moufang(P) and not is_a_loop(P)
