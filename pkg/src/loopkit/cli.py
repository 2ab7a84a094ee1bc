"""Command-line interface: ``loopkit <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 nothing found, 4 a cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .core import LoopError, LoopTable, ElementSubset, read_loop, serialize_table, validate_loop
from .isomorphism import CANONICAL_CAP
from .mappings import DEFAULT_GROUP_CAP, GroupTooLargeError, inner_mapping_group, multiplication_group
from .properties import (
    PROPERTY_NAMES,
    identity_suite,
    nucleus,
    property_report,
    quotient_with_cosets,
    verify_corollary2,
    verify_corollary4,
)
from .search import (
    DEFAULT_SEARCH_CAP,
    MODES,
    SearchCapError,
    SearchSpec,
    enumerate_loops,
    isotope_sweep,
    parse_spec,
)

EXIT_OK, EXIT_INVALID, EXIT_NOT_FOUND, EXIT_CAP = 0, 2, 3, 4


class CapExceeded(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    out: str | None = None
    fmt: str = "human"
    threads: int = 1
    order: int | None = None
    require: list[str] = field(default_factory=list)
    forbid: list[str] = field(default_factory=list)
    mode: str = "count"
    iso_reject: bool = False
    incremental: bool = True
    suite: str = "paper"
    max_order: int = 5
    by: str = "nucleus"
    search_cap: int = DEFAULT_SEARCH_CAP
    group_cap: int = DEFAULT_GROUP_CAP
    canonical_cap: int = CANONICAL_CAP

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        cfg = cls(ns.command)
        for name in cls.__dataclass_fields__:
            if name != "command" and hasattr(ns, name) and getattr(ns, name) is not None:
                setattr(cfg, name, getattr(ns, name))
        if cfg.threads < 1:
            raise LoopError("--threads must be positive")
        if cfg.canonical_cap > CANONICAL_CAP:
            raise LoopError(f"--canonical-cap cannot exceed {CANONICAL_CAP}")
        return cfg


# ---------------------------------------------------------------------------
# input / output helpers


def load_table(path: str) -> LoopTable:
    """A Cayley table file, or a JSON record with a ``table`` field."""
    text = sys.stdin.read() if path == "-" else open(path).read()
    if text.lstrip().startswith("{"):
        try:
            rows = json.loads(text)["table"]
        except (ValueError, KeyError, TypeError) as exc:
            raise LoopError(f"bad JSON table record: {exc}") from None
        return validate_loop(rows)
    return read_loop(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=False)


def _rows(L: LoopTable) -> list[list[int]]:
    return [list(r) for r in L.cells]


def _describe_witness(name: str, w) -> str:
    if name == "commutative":
        return f"{w[0]}*{w[1]} != {w[1]}*{w[0]}"
    if name == "group":
        a, b, c = w
        return f"({a}*{b})*{c} != {a}*({b}*{c})"
    if name == "moufang":
        x, y, z = w
        return f"x={x}, y={y}, z={z}: x*(y*(x*z)) != ((x*y)*x)*z"
    if name == "inverse_property":
        if w[0] == "no inverse":
            return f"{w[1]} has different left and right inverses"
        side = "x^-1*(x*y) != y" if w[0] == "left" else "(x*y)*y^-1 != x"
        return f"x={w[1]}, y={w[2]}: {side}"
    if name == "left_alternative":
        return f"x={w[0]}, y={w[1]}: x*(x*y) != (x*x)*y"
    if name == "right_alternative":
        return f"x={w[0]}, y={w[1]}: (x*y)*y != x*(y*y)"
    if name in ("power_associative", "diassociative"):
        *gens, a, b, c = w
        return f"<{','.join(map(str, gens))}> is not a group: ({a}*{b})*{c} != {a}*({b}*{c})"
    if name == "m4":
        if w[0] == "not power associative":
            return "not power associative"
        x, y, z = w
        return f"x={x}, y={y}, z={z}: (x*y)*(z*x^4) != (x*(y*z))*x^4"
    if name == "a_loop":
        kind, args, (a, b) = w
        op = f"{kind}({','.join(map(str, args))})"
        return f"{op} is not an automorphism: {op}({a}*{b}) != {op}({a})*{op}({b})"
    return repr(w)


class Output:
    def __init__(self, path: str | None):
        self.fh = open(path, "w") if path else sys.stdout

    def line(self, text: str = "") -> None:
        self.fh.write(text + "\n")

    def close(self) -> None:
        if self.fh is not sys.stdout:
            self.fh.close()
        else:
            self.fh.flush()


# ---------------------------------------------------------------------------
# commands


def cmd_check(cfg: RunConfig, out: Output) -> int:
    L = load_table(cfg.inputs[0])
    report = property_report(L)
    # group orders are extra information: past the cap they are reported as unknown
    groups = {"mlt_order": None, "mlt1_order": None}
    try:
        groups["mlt_order"] = multiplication_group(L, cap=cfg.group_cap).order
        groups["mlt1_order"] = inner_mapping_group(L, cap=cfg.group_cap).order
    except GroupTooLargeError:
        pass
    relabeled = L.origin_relabeling != tuple(range(L.n))
    if cfg.fmt == "json":
        record = {"table": _rows(L), "report": report.to_dict(), **groups}
        if relabeled:
            record["origin_relabeling"] = list(L.origin_relabeling)
        out.line(_dump(record))
        return EXIT_OK
    out.line(f"order {L.n}")
    if relabeled:
        out.line(f"relabeled so the identity is 0: {list(L.origin_relabeling)}")
    for name in PROPERTY_NAMES:
        ok = report.verdicts[name]
        note = "" if ok else "  " + _describe_witness(name, report.witnesses[name])
        out.line(f"  {name:<18} {'yes' if ok else 'no '}{note}")
    out.line(f"  Nuc(L) = {{{', '.join(map(str, report.nucleus))}}}")
    sizes = [f"> {cfg.group_cap}" if v is None else str(v) for v in groups.values()]
    out.line(f"  |Mlt(L)| = {sizes[0]}, |Mlt1(L)| = {sizes[1]}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out: Output) -> int:
    if cfg.suite != "paper":
        raise LoopError(f"unknown suite {cfg.suite!r}")
    L = load_table(cfg.inputs[0])
    suite = identity_suite(L)
    c2, c4 = verify_corollary2(L), verify_corollary4(L)
    status = EXIT_OK if suite.ok else 1
    if cfg.fmt == "json":
        out.line(_dump({"table": _rows(L), "suite": suite.to_dict(),
                        "a_loop_equivalences": c2, "nuclear_characterization": c4}))
        return status
    out.line("hypotheses: " + ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in suite.hypotheses.items()))
    for r in suite.results:
        if not r.applicable:
            mark = " -- "
        elif r.holds:
            mark = " ok "
        else:
            mark = "FAIL"
        tail = f"  witness {r.witness}" if r.applicable and not r.holds else ""
        out.line(f"[{mark}] {r.id:<24} {r.description}{tail}")
    if c2["applicable"]:
        out.line("A-loop: IP, alternative, diassociative, Moufang " +
                 ("agree" if c2["equivalent"] else "DISAGREE"))
    out.line(f"diassociative A-loop: {c4['lhs']}; Moufang with L/Nuc(L) commutative of exponent 3: {c4['rhs']}")
    out.line(f"{len(suite.failures)} failures")
    return status


def _spec_from(cfg: RunConfig) -> SearchSpec:
    if cfg.inputs:
        with open(cfg.inputs[0]) as fh:
            base = parse_spec(fh.read())
        order = cfg.order if cfg.order is not None else base.order
        require = list(base.require) + cfg.require
        forbid = list(base.forbid) + cfg.forbid
        mode = cfg.mode if cfg.mode != "count" else base.mode
        iso = cfg.iso_reject or base.iso_reject
        incremental = cfg.incremental and base.incremental
    else:
        if cfg.order is None:
            raise LoopError("search needs --order or a spec file")
        order, require, forbid = cfg.order, cfg.require, cfg.forbid
        mode, iso, incremental = cfg.mode, cfg.iso_reject, cfg.incremental
    if mode == "stream-all":
        mode = "stream"
    return SearchSpec.build(order, require, forbid, mode=mode, iso_reject=iso,
                            incremental=incremental, cap=cfg.search_cap)


def cmd_search(cfg: RunConfig, out: Output) -> int:
    spec = _spec_from(cfg)
    if spec.iso_reject and spec.order > cfg.canonical_cap:
        raise CapExceeded(f"canonicalization cap: order {spec.order} exceeds {cfg.canonical_cap}")
    emitted = [0]

    def sink(L: LoopTable):
        emitted[0] += 1
        if cfg.fmt == "json":
            out.line(_dump({"table": _rows(L)}))
        else:
            if emitted[0] > 1:
                out.line()
            out.fh.write(serialize_table(L))
        return None

    stats = enumerate_loops(spec, sink if spec.mode != "count" else None,
                            threads=cfg.threads)
    found = stats.models_after_iso if spec.iso_reject else stats.models
    if cfg.fmt == "json":
        out.line(_dump({"stats": stats.to_dict(), "models": found}))
    else:
        if emitted[0]:
            out.line()
        iso = f" ({stats.models_after_iso} up to isomorphism)" if spec.iso_reject else ""
        out.line(f"# {stats.models} model{'' if stats.models == 1 else 's'}{iso}")
        out.line(f"# nodes {stats.nodes}, kernel leaves {stats.kernel_leaves}, {stats.elapsed:.2f}s")
        for label, k in stats.prunes.items():
            out.line(f"#   pruned by {label}: {k}")
        for label, k in stats.rejected.items():
            out.line(f"#   rejected by {label}: {k}")
    if spec.mode == "first" and found == 0:
        return EXIT_NOT_FOUND
    return EXIT_OK


def cmd_quotient(cfg: RunConfig, out: Output) -> int:
    L = load_table(cfg.inputs[0])
    if cfg.by == "nucleus":
        H = nucleus(L)
    else:
        try:
            items = [int(t) for t in cfg.by.replace(",", " ").split()]
        except ValueError:
            raise LoopError(f"--by wants 'nucleus' or a list of elements, got {cfg.by!r}") from None
        H = ElementSubset.of(L, items)
    Q = quotient_with_cosets(L, H)
    if cfg.fmt == "json":
        out.line(_dump({"subloop": sorted(H.members), "cosets": [list(c) for c in Q.cosets],
                        "table": _rows(Q.table), "report": property_report(Q.table).to_dict()}))
        return EXIT_OK
    out.line(f"# L/N with N = {{{', '.join(map(str, sorted(H.members)))}}}, order {Q.table.n}")
    for i, c in enumerate(Q.cosets):
        out.line(f"# coset {i}: {list(c)}")
    out.fh.write(serialize_table(Q.table))
    return EXIT_OK


def cmd_isotopes(cfg: RunConfig, out: Output) -> int:
    L = load_table(cfg.inputs[0])
    rep = isotope_sweep(L)
    if cfg.fmt == "json":
        out.line(_dump(rep))
        return EXIT_OK
    out.line(f"order {rep['order']}: Moufang={rep['base_moufang']}, A-loop={rep['base_a_loop']}")
    out.line(f"{rep['isotopes']} principal isotopes (x/b)(a\\y): {rep['moufang']} Moufang, "
             f"{rep['a_loop']} A-loops, {rep['isomorphic_to_base']} isomorphic to L")
    out.line(f"{len(rep['counterexamples'])} isotopes of a Moufang A-loop that are not Moufang A-loops")
    return EXIT_OK


def cmd_catalog(cfg: RunConfig, out: Output) -> int:
    if cfg.max_order > cfg.canonical_cap:
        raise CapExceeded(f"canonicalization cap: order {cfg.max_order} exceeds {cfg.canonical_cap}")
    total = 0
    for n in range(1, cfg.max_order + 1):
        spec = SearchSpec(n, mode="stream", iso_reject=True, cap=cfg.search_cap)
        index = [0]

        def sink(L: LoopTable, n=n, index=index):
            index[0] += 1
            out.line(_dump({"order": n, "index": index[0], "table": _rows(L),
                            "report": property_report(L).to_dict()}))

        enumerate_loops(spec, sink, threads=cfg.threads)
        total += index[0]
        if cfg.fmt == "human":
            print(f"order {n}: {index[0]} loops up to isomorphism", file=sys.stderr)
    if cfg.fmt == "human":
        print(f"{total} loops", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "verify": cmd_verify,
    "search": cmd_search,
    "quotient": cmd_quotient,
    "isotopes": cmd_isotopes,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("human", "json"), default="human")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--search-cap", type=int, help=f"largest searchable order (default {DEFAULT_SEARCH_CAP})")
    common.add_argument("--group-cap", type=int, help=f"largest permutation group built (default {DEFAULT_GROUP_CAP})")
    common.add_argument("--canonical-cap", type=int, help=f"largest order canonicalized (default {CANONICAL_CAP})")

    p = argparse.ArgumentParser(prog="loopkit", description="Finite loop toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("check", "verify", "quotient", "isotopes"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("inputs", nargs=1, metavar="TABLE", help="Cayley table file or '-'")
        if name == "verify":
            sp.add_argument("--suite", default="paper", choices=("paper",))
        if name == "quotient":
            sp.add_argument("--by", default="nucleus", help="'nucleus' or comma-separated elements")
    sp = sub.add_parser("search", parents=[common])
    sp.add_argument("inputs", nargs="*", metavar="SPEC", help="optional spec file")
    sp.add_argument("--order", type=int)
    sp.add_argument("--require", action="append", default=[])
    sp.add_argument("--forbid", action="append", default=[])
    sp.add_argument("--mode", choices=MODES + ("stream-all",), default="count")
    sp.add_argument("--iso-reject", dest="iso_reject", action="store_true")
    sp.add_argument("--no-incremental", dest="incremental", action="store_false")
    sp = sub.add_parser("catalog", parents=[common])
    sp.add_argument("--max-order", type=int, default=5)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    out = None
    try:
        cfg = RunConfig.from_args(ns)
        out = Output(cfg.out)
        return COMMANDS[cfg.command](cfg, out)
    except (CapExceeded, SearchCapError, GroupTooLargeError) as exc:
        print(f"loopkit: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (LoopError, OSError) as exc:
        print(f"loopkit: {exc}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        if out is not None:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
