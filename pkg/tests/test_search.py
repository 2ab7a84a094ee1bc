"""Search kernels and driver against independent enumerators."""

import itertools
import random

import pytest

from loopkit import kernels
from loopkit.core import (
    LoopError,
    chein_double,
    cyclic_group,
    klein_group,
    relabel,
    symmetric_group,
    validate_loop,
)
from loopkit.isomorphism import are_isomorphic, canonical_form, element_invariants, find_isomorphism
from loopkit.properties import check_property, is_a_loop, is_moufang
from loopkit.search import (
    SearchCapError,
    SearchSpec,
    SoundnessError,
    all_loops,
    count_models,
    enumerate_loops,
    find_first,
    isotope_sweep,
    iter_loops,
    parse_spec,
    split_prefixes,
)
from loopkit.terms import builtin_identities, holds, parse_identity

BACKENDS = sorted(kernels.BACKENDS)


# --- independent enumerators -----------------------------------------------------

def naive_reduced_squares(n):
    """Generate and test: every row a permutation with the right first entry, keep the Latin ones."""
    if n == 1:
        return {((0,),)}
    rows_for = {i: [p for p in itertools.permutations(range(n)) if p[0] == i] for i in range(1, n)}
    out = set()
    for rows in itertools.product(*(rows_for[i] for i in range(1, n))):
        table = (tuple(range(n)),) + rows
        if all(len({table[i][j] for i in range(n)}) == n for j in range(n)):
            out.add(table)
    return out


def plain_backtrack_count(n):
    """Cell-by-cell fill with no bitmasks or propagation: only a row/column scan."""
    T = [[-1] * n for _ in range(n)]
    for k in range(n):
        T[0][k] = T[k][0] = k
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]

    def rec(d):
        if d == len(cells):
            return 1
        i, j = cells[d]
        total = 0
        for v in range(n):
            if v in T[i] or any(T[r][j] == v for r in range(n)):
                continue
            T[i][j] = v
            total += rec(d + 1)
            T[i][j] = -1
        return total

    return rec(0)


def _cells(L):
    return L.cells


# --- unconstrained enumeration --------------------------------------------------

@pytest.mark.parametrize("n, expected", [(1, 1), (2, 1), (3, 1), (4, 4), (5, 56)])
def test_unconstrained_matches_naive_oracle(n, expected):
    oracle = naive_reduced_squares(n)
    assert len(oracle) == expected
    for backend in BACKENDS:
        got = [L.cells for L in iter_loops(SearchSpec(n, mode="stream"), backend=backend)]
        assert len(got) == len(set(got))
        assert set(got) == oracle


@pytest.mark.slow
def test_order_six_count_two_ways():
    assert plain_backtrack_count(6) == 9408
    assert count_models(SearchSpec(6)) == 9408


def test_iso_classes_small_orders():
    assert [len(all_loops(n)) for n in range(1, 6)] == [1, 1, 1, 2, 6]


def test_canonical_dedup_matches_pairwise_isomorphism():
    tables = iter_loops(SearchSpec(5, mode="stream"))
    reps = []
    for L in tables:
        if not any(are_isomorphic(L, R) for R in reps):
            reps.append(L)
    assert len(reps) == 6
    assert len({canonical_form(L).cells for L in tables}) == 6


# --- kernels ---------------------------------------------------------------------

def _programs(*names):
    from loopkit.terms import compile_equation
    B = builtin_identities()
    return [compile_equation(B[k]).as_tuple() for k in names]


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernel not built")
@pytest.mark.parametrize("n", [4, 5, 6])
def test_backends_agree(n):
    progs = _programs("left_inverse_property", "right_inverse_property", "flexible", "m4")
    runs = {}
    for name in BACKENDS:
        out = []
        stats = kernels.get_backend(name).search_tables(n, progs, True, out.append)
        runs[name] = (stats, out)
    assert runs["cython"] == runs["python"]


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernel not built")
def test_canonical_backends_agree():
    rng = random.Random(5)
    for L in all_loops(5) + [symmetric_group(3), klein_group()]:
        tail = list(range(1, L.n))
        rng.shuffle(tail)
        M = relabel(L, [0] + tail)
        a = kernels.get_backend("cython").canonical_table(M.n, M.flat())
        b = kernels.get_backend("python").canonical_table(M.n, M.flat())
        assert a == b


def test_prefix_subtrees_partition_the_tree():
    n = 5
    whole = [tuple(t) for t in _collect(n, ())]
    parts = []
    for p in split_prefixes(n, 2):
        parts.extend(tuple(t) for t in _collect(n, p))
    assert parts == whole


def _collect(n, prefix):
    out = []
    kernels.search_tables(n, [], True, out.append, prefix)
    return out


def test_kernel_stop_and_bad_prefix():
    out = []
    kernels.search_tables(5, [], True, lambda t: out.append(t) or False)
    assert len(out) == 1
    assert kernels.search_tables(4, [], True, None, (0, 0)) == (0, 0, [])


# --- pruning safety and soundness --------------------------------------------------

RANDOM_EQUATIONS = [
    "x*(y*x) = (x*y)*x",
    "x\\(x*y) = y/e",
    "(x*y)^-1 = y^-1*x^-1",
    "x*(x*(x*y)) = ((x*x)*x)*y",
    "(x/y)*(y\\x) = x*x",
    "x*(y*z) = (y*x)*z",
]


@pytest.mark.parametrize("text", RANDOM_EQUATIONS)
def test_incremental_checking_never_changes_the_model_set(text):
    eq = parse_identity(text)
    for n in (3, 4, 5):
        on = [L.cells for L in iter_loops(SearchSpec(n, (eq,), mode="stream"))]
        off = [L.cells for L in iter_loops(SearchSpec(n, (eq,), mode="stream", incremental=False))]
        assert on == off
        brute = [L.cells for L in iter_loops(SearchSpec(n, mode="stream")) if holds(L, eq)]
        assert on == brute


@pytest.mark.parametrize("names", [("diassociative", "a_loop"), ("moufang",), ("m4",),
                                   ("power_associative",), ("commutative", "inverse_property")])
def test_structural_requirements_pruning_safety(names):
    for n in (4, 5, 6):
        on = [L.cells for L in iter_loops(SearchSpec.build(n, names, mode="stream"))]
        off = [L.cells for L in iter_loops(SearchSpec.build(n, names, mode="stream", incremental=False))]
        assert on == off


def test_emitted_tables_satisfy_requirements():
    spec = SearchSpec.build(6, ["power_associative", "x*(y*x) = (x*y)*x"], ["commutative"], mode="stream")
    tables = iter_loops(spec)
    assert tables
    for L in tables:
        assert check_property(L, "power_associative")
        assert not check_property(L, "commutative")
        assert holds(L, "flexible")


def test_soundness_error_on_broken_kernel(monkeypatch):
    class Liar:
        @staticmethod
        def search_tables(n, programs, incremental=True, on_model=None, prefix=()):
            # claims a non-commutative table satisfies the commutative law
            on_model(list(sum(symmetric_group(3).cells, ())))
            return 1, 1, [0] * len(programs)

    monkeypatch.setitem(kernels.BACKENDS, "liar", Liar)
    with pytest.raises(SoundnessError):
        enumerate_loops(SearchSpec.build(6, ["commutative"], mode="stream"), backend="liar")


# --- driver -------------------------------------------------------------------------

def test_no_diassociative_a_loop_that_is_not_moufang_small():
    for n in range(1, 7):
        stats = enumerate_loops(SearchSpec.build(n, ["diassociative", "a_loop"], ["moufang"]))
        assert stats.models == 0
        assert stats.models <= stats.kernel_leaves


def test_smallest_nonassociative_loop():
    assert find_first(SearchSpec.build(4, forbid=["group"])) is None
    L = find_first(SearchSpec.build(5, forbid=["group"]))
    assert L is not None and not check_property(L, "group")


def test_find_first_is_first_of_stream():
    spec = SearchSpec.build(5, forbid=["commutative"], mode="stream")
    assert find_first(spec) == iter_loops(spec)[0]


def test_determinism_and_threads():
    spec = SearchSpec.build(5, forbid=["group"], mode="stream")
    a = [L.cells for L in iter_loops(spec)]
    b = [L.cells for L in iter_loops(spec)]
    assert a == b
    threaded = []
    stats = enumerate_loops(spec, threaded.append, threads=2)
    assert [L.cells for L in threaded] == a
    assert stats.models == len(a)
    assert count_models(SearchSpec(6), threads=2) == 9408
    iso = SearchSpec(5, mode="stream", iso_reject=True)
    assert [L.cells for L in iter_loops(iso)] == [
        L.cells for L in _threaded(iso)]


def _threaded(spec):
    out = []
    enumerate_loops(spec, out.append, threads=2)
    return out


def test_stats_fields():
    stats = enumerate_loops(SearchSpec.build(5, ["moufang"], mode="count", iso_reject=True))
    d = stats.to_dict()
    assert d["models"] >= d["models_after_iso"]
    assert set(d["prunes"]) >= {"moufang"}
    assert d["nodes"] > 0


def test_spec_validation():
    with pytest.raises(LoopError):
        SearchSpec.build(4, ["moufang"], ["moufang"])
    with pytest.raises(LoopError):
        SearchSpec(0)
    with pytest.raises(LoopError):
        SearchSpec(4, mode="all")
    with pytest.raises(SearchCapError):
        enumerate_loops(SearchSpec(11))
    with pytest.raises(SearchCapError):
        enumerate_loops(SearchSpec(9, iso_reject=True, cap=12))


def test_parse_spec_file():
    spec = parse_spec("""
        # theorem check
        order: 5
        require: diassociative
        require: a_loop
        forbid: moufang
        mode: count
        iso_reject: true
    """)
    assert spec.order == 5 and spec.iso_reject
    assert [c.label for c in spec.require] == ["diassociative", "a_loop"]
    assert [c.label for c in spec.forbid] == ["moufang"]
    eq_spec = parse_spec("order: 4\nrequire: x*y = y*x\n")
    assert eq_spec.require[0].equation is not None
    with pytest.raises(LoopError):
        parse_spec("require: moufang\n")
    with pytest.raises(LoopError):
        parse_spec("order: 4\ncolour: red\n")


# --- isomorphism -------------------------------------------------------------------

def test_isomorphism_under_random_relabeling():
    rng = random.Random(11)
    for L in [chein_double(symmetric_group(3)), symmetric_group(3)] + all_loops(5):
        tail = list(range(1, L.n))
        rng.shuffle(tail)
        phi = [0] + tail
        M = relabel(L, phi)
        iso = find_isomorphism(L, M)
        assert iso is not None
        assert all(iso[L.mul(a, b)] == M.mul(iso[a], iso[b]) for a in range(L.n) for b in range(L.n))
        if L.n <= 8:
            assert canonical_form(L) == canonical_form(M)


def test_non_isomorphic():
    assert not are_isomorphic(cyclic_group(4), klein_group())
    assert element_invariants(cyclic_group(4)) != element_invariants(klein_group())
    with pytest.raises(LoopError):
        are_isomorphic(cyclic_group(4), cyclic_group(5))
    with pytest.raises(LoopError):
        canonical_form(cyclic_group(9))


# --- isotopes ----------------------------------------------------------------------

def test_isotopes_of_groups():
    for G in (cyclic_group(4), klein_group(), symmetric_group(3)):
        rep = isotope_sweep(G)
        assert rep["isotopes"] == G.n ** 2
        assert rep["moufang"] == rep["a_loop"] == rep["isomorphic_to_base"] == G.n ** 2
        assert rep["counterexamples"] == []


def test_isotopes_of_trivial_loop():
    rep = isotope_sweep(cyclic_group(1))
    assert rep["isotopes"] == 1 and rep["records"][0]["isomorphic_to_base"]


def test_isotopes_of_order_12_moufang_loop_reported():
    M = chein_double(symmetric_group(3))
    rep = isotope_sweep(M, compare_iso=False)
    assert rep["base_moufang"] and not rep["base_a_loop"]
    assert rep["moufang"] == 144  # Moufang loops are isotopically invariant
    assert rep["counterexamples"] == []  # nothing to report: the base is not an A-loop
