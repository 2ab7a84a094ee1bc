"""Finite model search over reduced Latin squares.

The kernel (compiled or pure Python, see :mod:`loopkit.kernels`) fills the
table row by row with element 0 fixed as the identity, keeps rows and columns
all-different, and checks required identities on every ground instance as soon
as its cells are known.  Everything that is not an identity is checked here on
completed tables, using the properties and terms modules only.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Union

from . import kernels
from .core import LoopError, LoopTable, RawTable, validate_loop, principal_isotope
from .isomorphism import CANONICAL_CAP, are_isomorphic, canonical_form
from .properties import PROPERTY_NAMES, check_property, is_a_loop, is_moufang
from .terms import (
    Equation,
    builtin_identities,
    compile_equation,
    format_equation,
    holds,
    parse_identity,
)

DEFAULT_SEARCH_CAP = 10
MODES = ("first", "count", "stream")

STRUCTURAL = set(PROPERTY_NAMES) | {"associative"}

_DIASSOCIATIVE = (
    "left_inverse_property", "right_inverse_property", "left_alternative",
    "right_alternative", "flexible", "cube_associative", "two_sided_inverse",
)

# Identities every loop with the named property satisfies; used only to prune.
IMPLIED = {
    "group": ("associative",),
    "associative": ("associative",),
    "commutative": ("commutative",),
    # Moufang loops are diassociative
    "moufang": ("moufang",) + _DIASSOCIATIVE,
    "inverse_property": ("left_inverse_property", "right_inverse_property"),
    "left_alternative": ("left_alternative",),
    "right_alternative": ("right_alternative",),
    "power_associative": ("cube_associative", "two_sided_inverse"),
    # M4 loops are Moufang
    "m4": ("moufang",) + _DIASSOCIATIVE + ("m4",),
    "diassociative": _DIASSOCIATIVE,
    # A-loops are power associative
    "a_loop": ("cube_associative", "two_sided_inverse"),
    "loop": (),
}


class SearchCapError(LoopError):
    pass


class SoundnessError(AssertionError):
    """A table emitted by the kernel failed an identity it was meant to enforce."""


@dataclass(frozen=True)
class Constraint:
    """A named structural property or an identity."""

    label: str
    prop: str | None = None
    equation: Equation | None = None

    def check(self, L: LoopTable) -> bool:
        if self.prop is not None:
            if self.prop == "associative":
                return check_property(L, "group")
            return check_property(L, self.prop)
        return holds(L, self.equation)


def make_constraint(item: Union[str, Equation, Constraint]) -> Constraint:
    if isinstance(item, Constraint):
        return item
    if isinstance(item, Equation):
        return Constraint(format_equation(item), equation=item)
    text = item.strip()
    if text in STRUCTURAL:
        return Constraint(text, prop=text)
    catalog = builtin_identities()
    if text in catalog:
        return Constraint(text, equation=catalog[text])
    return Constraint(text, equation=parse_identity(text))


@dataclass(frozen=True)
class SearchSpec:
    order: int
    require: tuple[Constraint, ...] = ()
    forbid: tuple[Constraint, ...] = ()
    mode: str = "count"
    iso_reject: bool = False
    incremental: bool = True
    cap: int = DEFAULT_SEARCH_CAP

    def __post_init__(self):
        if self.order < 1:
            raise LoopError("order must be at least 1")
        if self.mode not in MODES:
            raise LoopError(f"mode must be one of {MODES}")
        object.__setattr__(self, "require", tuple(make_constraint(c) for c in self.require))
        object.__setattr__(self, "forbid", tuple(make_constraint(c) for c in self.forbid))
        clash = {c.label for c in self.require} & {c.label for c in self.forbid}
        if clash:
            raise LoopError(f"required and forbidden: {sorted(clash)}")

    @classmethod
    def build(cls, order: int, require: Iterable = (), forbid: Iterable = (), **kw) -> "SearchSpec":
        return cls(order, tuple(require), tuple(forbid), **kw)

    def pruning_equations(self) -> list[tuple[str, Equation]]:
        """Required identities plus identities implied by required properties."""
        catalog = builtin_identities()
        out: dict[str, Equation] = {}
        for c in self.require:
            if c.equation is not None:
                out.setdefault(c.label, c.equation)
            else:
                for name in IMPLIED[c.prop]:
                    out.setdefault(name, catalog[name])
        # identical equations under different labels: keep the first
        seen, eqs = set(), []
        for label, eq in out.items():
            key = format_equation(eq)
            if key not in seen:
                seen.add(key)
                eqs.append((label, eq))
        return eqs


def parse_spec(text: str) -> SearchSpec:
    """Read the ``key: value`` spec-file format."""
    order = None
    require, forbid = [], []
    kw: dict = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise LoopError(f"bad spec line {raw!r}")
        key, value = (s.strip() for s in line.split(":", 1))
        if key == "order":
            order = int(value)
        elif key == "require":
            require.append(value)
        elif key == "forbid":
            forbid.append(value)
        elif key == "mode":
            kw["mode"] = value
        elif key == "iso_reject":
            kw["iso_reject"] = value.lower() in ("1", "true", "yes", "on")
        elif key == "incremental":
            kw["incremental"] = value.lower() in ("1", "true", "yes", "on")
        elif key == "cell_order":
            if value != "row-major":
                raise LoopError("only row-major cell order is supported")
        else:
            raise LoopError(f"unknown spec key {key!r}")
    if order is None:
        raise LoopError("spec has no order line")
    return SearchSpec.build(order, require, forbid, **kw)


@dataclass
class SearchStats:
    nodes: int = 0
    kernel_leaves: int = 0
    models: int = 0
    models_after_iso: int = 0
    elapsed: float = 0.0
    prunes: dict[str, int] = field(default_factory=dict)
    rejected: dict[str, int] = field(default_factory=dict)

    def merge(self, other: "SearchStats") -> "SearchStats":
        out = SearchStats(
            self.nodes + other.nodes,
            self.kernel_leaves + other.kernel_leaves,
            self.models + other.models,
            self.models_after_iso + other.models_after_iso,
            self.elapsed + other.elapsed,
            dict(self.prunes),
            dict(self.rejected),
        )
        for src, dst in ((other.prunes, out.prunes), (other.rejected, out.rejected)):
            for k, v in src.items():
                dst[k] = dst.get(k, 0) + v
        return out

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "kernel_leaves": self.kernel_leaves,
            "models": self.models,
            "models_after_iso": self.models_after_iso,
            "elapsed": round(self.elapsed, 6),
            "prunes": dict(self.prunes),
            "rejected": dict(self.rejected),
        }


def _table(n: int, flat: list[int]) -> LoopTable:
    return validate_loop(RawTable(n, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))))


def _accepts(spec: SearchSpec, L: LoopTable, stats: SearchStats,
             enforced: list[tuple[str, Equation]]) -> bool:
    for label, eq in enforced:
        if not holds(L, eq):
            raise SoundnessError(f"kernel emitted a table violating {label}")
    for c in spec.require:
        if not c.check(L):
            stats.rejected[c.label] = stats.rejected.get(c.label, 0) + 1
            return False
    for c in spec.forbid:
        if c.check(L):
            key = "forbid:" + c.label
            stats.rejected[key] = stats.rejected.get(key, 0) + 1
            return False
    return True


def _run_subtree(spec: SearchSpec, prefix: tuple[int, ...], backend: str | None,
                 sink: Callable[[LoopTable], object] | None, collect: bool):
    """Search one subtree; returns ``(stats, accepted tables or None)``."""
    n = spec.order
    kernel = kernels.get_backend(backend)
    enforced = spec.pruning_equations() if spec.incremental else []
    labelled = [(label, compile_equation(eq).as_tuple()) for label, eq in enforced]
    stats = SearchStats()
    kept: list[LoopTable] = []
    stop_after_first = spec.mode == "first"

    def on_model(flat):
        L = _table(n, flat)
        if not _accepts(spec, L, stats, enforced):
            return True
        stats.models += 1
        if collect:
            kept.append(L)
        if sink is not None and sink(L) is False:
            return False
        return not stop_after_first

    t0 = time.perf_counter()
    nodes, leaves, prunes = kernel.search_tables(
        n, [p for _, p in labelled], spec.incremental, on_model, prefix)
    stats.elapsed = time.perf_counter() - t0
    stats.nodes = nodes
    stats.kernel_leaves = leaves
    stats.prunes = {label: int(c) for (label, _), c in zip(labelled, prunes)}
    return stats, (kept if collect else None)


def _worker(args):
    spec, prefix, backend, collect = args
    stats, kept = _run_subtree(spec, prefix, backend, None, collect)
    return stats, [L.cells for L in kept] if kept is not None else None


def split_prefixes(n: int, depth: int) -> list[tuple[int, ...]]:
    """Latin-consistent values for the first ``depth`` free cells, in search order."""
    free = [(i, j) for i in range(1, n) for j in range(1, n)][:depth]
    out: list[tuple[int, ...]] = []

    def rec(k, cells: dict, acc: tuple):
        if k == len(free):
            out.append(acc)
            return
        i, j = free[k]
        used = {cells.get((i, c)) for c in range(n)} | {cells.get((r, j)) for r in range(n)}
        for v in range(n):
            if v not in used:
                cells[(i, j)] = v
                rec(k + 1, cells, acc + (v,))
                del cells[(i, j)]

    base = {(0, c): c for c in range(n)}
    base.update({(r, 0): r for r in range(n)})
    rec(0, base, ())
    return out


def enumerate_loops(spec: SearchSpec, sink: Callable[[LoopTable], object] | None = None,
                    threads: int = 1, backend: str | None = None) -> SearchStats:
    """Run the search, passing each accepted table to ``sink``.

    With ``iso_reject`` the sink sees one canonical-form table per
    isomorphism class, in order of first discovery.  ``sink`` returning False
    stops the search.  ``threads > 1`` splits the tree at the first free cells
    across processes; tables reach the sink in the same order as a
    sequential run.
    """
    n = spec.order
    if n > spec.cap:
        raise SearchCapError(f"order {n} exceeds search cap {spec.cap}")
    if spec.iso_reject and n > CANONICAL_CAP:
        raise SearchCapError(f"canonicalization cap: order {n} exceeds {CANONICAL_CAP}")
    seen: set = set()
    stopped = False
    after_iso = 0

    def deliver(L: LoopTable) -> bool:
        nonlocal stopped, after_iso
        if spec.iso_reject:
            C = canonical_form(L, backend=backend)
            if C.cells in seen:
                return True
            seen.add(C.cells)
            L = C
        after_iso += 1
        if sink is not None and sink(L) is False:
            stopped = True
            return False
        return True

    t0 = time.perf_counter()
    nfree = (n - 1) * (n - 1)
    delivered = True
    if threads <= 1 or nfree < 2:
        stats, _ = _run_subtree(spec, (), backend, deliver, False)
    else:
        depth = 1 if n > 4 else min(nfree, 2)
        prefixes = split_prefixes(n, depth)
        collect = delivered = spec.mode != "count" or spec.iso_reject or sink is not None
        stats = SearchStats()
        with ProcessPoolExecutor(max_workers=threads) as pool:
            jobs = [(spec, p, backend, collect) for p in prefixes]
            for sub, tables in pool.map(_worker, jobs):
                stats = stats.merge(sub)
                if stopped or tables is None:
                    continue
                for cells in tables:
                    if not deliver(LoopTable(n, cells)):
                        break
                    if spec.mode == "first":
                        stopped = True
                        break
        if spec.mode == "first":
            stats.models = min(stats.models, 1)
    # plain threaded counts never ship tables back, so nothing was delivered
    stats.models_after_iso = after_iso if delivered else stats.models
    stats.elapsed = time.perf_counter() - t0
    return stats


def iter_loops(spec: SearchSpec, backend: str | None = None) -> list[LoopTable]:
    out: list[LoopTable] = []
    enumerate_loops(spec, out.append, backend=backend)
    return out


def count_models(spec: SearchSpec, threads: int = 1, backend: str | None = None) -> int:
    stats = enumerate_loops(spec, None, threads=threads, backend=backend)
    return stats.models_after_iso if spec.iso_reject else stats.models


def find_first(spec: SearchSpec, backend: str | None = None) -> LoopTable | None:
    found: list[LoopTable] = []

    def take(L):
        found.append(L)
        return False

    first = SearchSpec(spec.order, spec.require, spec.forbid, "first", spec.iso_reject,
                       spec.incremental, spec.cap)
    enumerate_loops(first, take, backend=backend)
    return found[0] if found else None


def all_loops(n: int, iso_reject: bool = True, backend: str | None = None) -> list[LoopTable]:
    """Every loop of order ``n`` (one per isomorphism class by default)."""
    return iter_loops(SearchSpec(n, mode="stream", iso_reject=iso_reject), backend=backend)


# ---------------------------------------------------------------------------
# isotopes


def isotope_sweep(L: LoopTable, compare_iso: bool = True) -> dict:
    """Principal isotopes ``(x/b)(a\\y)`` for all ``a, b`` with their Moufang and A-loop verdicts."""
    base_moufang, base_a = is_moufang(L), is_a_loop(L)
    records = []
    counterexamples = []
    for a in range(L.n):
        for b in range(L.n):
            P = principal_isotope(L, a, b)
            m, al = is_moufang(P), is_a_loop(P)
            rec = {"a": a, "b": b, "moufang": m, "a_loop": al}
            if compare_iso:
                rec["isomorphic_to_base"] = are_isomorphic(P, L)
            records.append(rec)
            if base_moufang and base_a and not (m and al):
                counterexamples.append({"a": a, "b": b, "table": [list(r) for r in P.cells]})
    return {
        "order": L.n,
        "base_moufang": base_moufang,
        "base_a_loop": base_a,
        "isotopes": len(records),
        "moufang": sum(r["moufang"] for r in records),
        "a_loop": sum(r["a_loop"] for r in records),
        "isomorphic_to_base": sum(r.get("isomorphic_to_base", False) for r in records) if compare_iso else None,
        "records": records,
        "counterexamples": counterexamples,
    }
