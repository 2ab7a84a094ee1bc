"""Compare the compiled and pure-Python kernels on the same workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each workload runs on every available backend; node and leaf counts must
match, so the table doubles as a cross-check.
"""

import argparse
import json
import random
import time

from loopkit import kernels
from loopkit.core import group_fixtures, relabel
from loopkit.search import SearchSpec, all_loops
from loopkit.terms import compile_equation


def search_workload(n, names):
    spec = SearchSpec.build(n, names)
    progs = [compile_equation(eq).as_tuple() for _, eq in spec.pruning_equations()]

    def run(backend):
        nodes, leaves, _ = backend.search_tables(n, progs, True, None)
        return nodes, leaves

    return run


def canonical_workload():
    rng = random.Random(3)
    loops = all_loops(6) + [G for G in group_fixtures(8).values() if G.n >= 7]
    shuffled = []
    for L in loops:
        for _ in range(3):
            tail = list(range(1, L.n))
            rng.shuffle(tail)
            shuffled.append(relabel(L, [0] + tail))

    def run(backend):
        return [backend.canonical_table(L.n, L.flat()) for L in shuffled]

    return run


WORKLOADS = [
    ("unconstrained n=6", search_workload(6, [])),
    ("diassociative+a_loop n=6", search_workload(6, ["diassociative", "a_loop"])),
    ("diassociative+a_loop n=7", search_workload(7, ["diassociative", "a_loop"])),
    ("moufang n=7", search_workload(7, ["moufang"])),
    ("canonical form, orders 6-8", canonical_workload()),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=1)
    ap.add_argument("--json", help="also write the results here")
    args = ap.parse_args(argv)

    names = sorted(kernels.BACKENDS)
    if "cython" not in names:
        print("compiled kernel not available; timing the Python fallback only")
    rows = []
    print(f"{'workload':40s}" + "".join(f"{b:>12s}" for b in names) + "     speedup")
    for label, run in WORKLOADS:
        times, results = {}, {}
        for b in names:
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                results[b] = run(kernels.BACKENDS[b])
                best = min(best, time.perf_counter() - t0)
            times[b] = best
        if len({repr(r) for r in results.values()}) != 1:
            raise SystemExit(f"backends disagree on {label!r}")
        speed = times["python"] / times["cython"] if "cython" in times else 1.0
        print(f"{label:40s}" + "".join(f"{times[b]:11.3f}s" for b in names) + f"{speed:11.1f}x")
        rows.append({"workload": label, "seconds": times, "speedup": speed})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
