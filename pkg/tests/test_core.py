import itertools
import random

import pytest

from loopkit.core import (
    ElementSubset,
    InverseUndefinedError,
    LoopError,
    LoopTable,
    NotALoopError,
    NotClosedError,
    RawTable,
    TableParseError,
    associativity_witness,
    chein_double,
    cyclic_group,
    dihedral_group,
    direct_product,
    group_fixtures,
    has_two_sided_inverses,
    inverse,
    is_associative_on,
    klein_group,
    left_div,
    parse_table,
    power,
    principal_isotope,
    quaternion_group,
    read_loop,
    relabel,
    right_div,
    serialize_table,
    subloop_generated,
    symmetric_group,
    validate_loop,
)

Z3_TEXT = """# cyclic group of order 3
3
0 1 2
1 2 0

2 0 1
"""

# a nonassociative loop of order 5 without two-sided inverses
L5 = validate_loop([
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 3, 4, 0, 1],
    [3, 4, 1, 2, 0],
    [4, 2, 0, 1, 3],
])


def test_parse_with_comments_and_blank_lines():
    t = parse_table(Z3_TEXT)
    assert t.n == 3
    assert t.cells[2] == (2, 0, 1)


@pytest.mark.parametrize("text, fragment", [
    ("", "missing order"),
    ("# only a comment\n", "missing order"),
    ("x\n0\n", "missing order"),
    ("2\n0 1\n", "expected 2 rows"),
    ("2\n0 1\n1\n", "ragged"),
    ("2\n0 1\n1 a\n", "non-integer"),
    ("2\n0 1\n1 2\n", "out of range"),
    ("0\n", "positive"),
    ("65\n", "exceeds cap"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(TableParseError, match=fragment):
        parse_table(text)


def test_serialize_round_trip():
    for L in group_fixtures(12).values():
        assert read_loop(serialize_table(L)) == L


def test_validate_rejects_non_latin_and_no_identity():
    with pytest.raises(NotALoopError, match="row"):
        validate_loop([[0, 1], [1, 1]])
    with pytest.raises(NotALoopError, match="column"):
        validate_loop([[0, 1, 2], [1, 2, 0], [1, 0, 2]])
    # a quasigroup without identity: x*y = -x-y mod 3
    with pytest.raises(NotALoopError, match="identity"):
        validate_loop([[(-x - y) % 3 for y in range(3)] for x in range(3)])


def test_validate_moves_identity_to_zero():
    # Z3 written with identity 2
    raw = [[(x + y + 1) % 3 for y in range(3)] for x in range(3)]
    assert all(raw[2][x] == x for x in range(3))
    L = validate_loop(raw)
    assert L.origin_relabeling == (2, 1, 0)
    assert all(L.cells[0][x] == x and L.cells[x][0] == x for x in range(3))
    # relabel back
    phi = L.origin_relabeling
    for a, b in itertools.product(range(3), repeat=2):
        assert phi[raw[a][b]] == L.cells[phi[a]][phi[b]]


def test_raw_table_checks_shape():
    with pytest.raises(LoopError):
        RawTable(2, ((0, 1),))


def test_divisions_are_inverse_to_product():
    L = chein_double(symmetric_group(3))
    for a, b in itertools.product(range(L.n), repeat=2):
        x = left_div(L, a, b)
        assert L.mul(a, x) == b
        y = right_div(L, a, b)
        assert L.mul(y, a) == b


def test_inverses():
    S3 = symmetric_group(3)
    for x in range(6):
        assert S3.mul(x, inverse(S3, x)) == 0
    assert has_two_sided_inverses(S3)
    assert not has_two_sided_inverses(L5)
    with pytest.raises(InverseUndefinedError):
        inverse(L5, next(x for x in range(5) if L5.left_div(x, 0) != L5.right_div(x, 0)))


def test_power_bracketing():
    Z = cyclic_group(7)
    assert [power(Z, 1, k) for k in range(8)] == [0, 1, 2, 3, 4, 5, 6, 0]
    assert power(Z, 3, -1) == 4
    # L5 is not power associative: the two bracketings of x^4 can differ
    assert any(power(L5, x, 4) != power(L5, x, 4, right=True) for x in range(5))


def test_subloop_generated():
    Z = cyclic_group(12)
    assert subloop_generated(Z, [4]).members == frozenset({0, 4, 8})
    assert len(subloop_generated(Z, [4, 6])) == 6
    assert subloop_generated(Z, []).members == frozenset({0})
    D4 = dihedral_group(4)
    assert len(subloop_generated(D4, range(1, 8))) == 8


def test_associativity_witness():
    assert associativity_witness(quaternion_group()) is None
    w = associativity_witness(L5)
    a, b, c = w
    assert L5.mul(L5.mul(a, b), c) != L5.mul(a, L5.mul(b, c))
    assert is_associative_on(L5, [0])
    with pytest.raises(NotClosedError):
        is_associative_on(cyclic_group(4), [1])


def test_relabel_requires_fixed_identity():
    Z = cyclic_group(4)
    with pytest.raises(LoopError):
        relabel(Z, [1, 0, 2, 3])
    W = relabel(Z, [0, 3, 2, 1])
    assert W == Z  # x -> -x is an automorphism


def test_fixtures_are_groups_of_the_right_order():
    fx = group_fixtures(16)
    assert fx["Z16"].n == 16
    assert fx["S3"].n == 6 and fx["Klein"].n == 4
    for name, G in fx.items():
        assert is_associative_on(G), name
    assert direct_product(cyclic_group(2), cyclic_group(3)).n == 6
    assert klein_group() == direct_product(cyclic_group(2), cyclic_group(2))


def test_chein_double_is_nonassociative_of_twice_the_order():
    M = chein_double(symmetric_group(3))
    assert M.n == 12
    assert associativity_witness(M) is not None
    # doubling an abelian group gives a group
    assert associativity_witness(chein_double(cyclic_group(3))) is None


def test_principal_isotope_of_group_is_isomorphic_table_size():
    G = symmetric_group(3)
    for a, b in itertools.product(range(6), repeat=2):
        P = principal_isotope(G, a, b)
        assert P.n == 6
        assert is_associative_on(P)
    assert principal_isotope(G, 0, 0) == G


def test_loop_table_is_hashable_and_compares_by_cells():
    a = cyclic_group(5)
    b = LoopTable(5, a.cells)
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1


def test_element_subset():
    Z = cyclic_group(4)
    H = ElementSubset.of(Z, [0, 2])
    assert 2 in H and 1 not in H
    assert H.flags() == [True, False, True, False]
    with pytest.raises(LoopError):
        ElementSubset.of(Z, [4])


def test_random_relabel_preserves_products():
    rng = random.Random(3)
    L = chein_double(symmetric_group(3))
    tail = list(range(1, 12))
    rng.shuffle(tail)
    phi = [0] + tail
    M = relabel(L, phi)
    for a, b in itertools.product(range(12), repeat=2):
        assert M.mul(phi[a], phi[b]) == phi[L.mul(a, b)]
