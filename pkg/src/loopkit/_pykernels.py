"""Pure-Python search and canonicalization kernels.

Reference implementation of the kernel API; ``_ckernels.pyx`` mirrors it line
for line and must produce identical tables in identical order with identical
statistics.

Programs are ``(nvars, instrs, lhs, rhs)`` tuples as produced by
``terms.compile_equation(...).as_tuple()``.
"""

import itertools

OP_MUL, OP_LDIV, OP_RDIV, OP_INV = 0, 1, 2, 3
UNKNOWN, SATISFIED, VIOLATED = 0, 1, 2


def _instance_status(prog, a, n, T, LD, RD, regs, filled):
    """Evaluate one ground instance with all cells of depth <= ``filled`` known.

    Returns ``(status, block)``; for UNKNOWN, ``block`` is the earliest cell
    depth at which some missing lookup could become known.
    """
    nvars, instrs, lhs, rhs = prog
    m = n - 1
    block = m * m
    for v in range(nvars):
        regs[v] = a % n
        a //= n
    regs[nvars] = 0
    r = nvars + 1
    for op, x, y in instrs:
        u = regs[x]
        if op == OP_INV:
            if u < 0:
                val = -1
            else:
                right, left = LD[u * n], RD[u * n]
                if right >= 0 and left >= 0:
                    if right != left:
                        return VIOLATED, 0
                    val = right
                else:
                    val = -1
                    if right < 0:
                        block = min(block, _row_next(u, filled, m))
                    if left < 0:
                        block = min(block, _col_next(u, filled, m))
        else:
            w = regs[y]
            if u < 0 or w < 0:
                val = -1
            elif op == OP_MUL:
                val = T[u * n + w]
                if val < 0:
                    block = min(block, (u - 1) * m + w - 1)
            elif op == OP_LDIV:
                val = LD[u * n + w]
                if val < 0:
                    block = min(block, _row_next(u, filled, m))
            else:
                val = RD[w * n + u]
                if val < 0:
                    block = min(block, _col_next(w, filled, m))
        regs[r] = val
        r += 1
    a_, b_ = regs[lhs], regs[rhs]
    if a_ < 0 or b_ < 0:
        return UNKNOWN, block
    return (SATISFIED if a_ == b_ else VIOLATED), 0


def _row_next(u, filled, m):
    """Depth of the first unfilled cell in row ``u``."""
    return max(filled + 1, (u - 1) * m)


def _col_next(w, filled, m):
    """Depth of the first unfilled cell in column ``w``."""
    t = filled + 2 - w
    k = 0 if t <= 0 else -(-t // m)
    return k * m + w - 1


def search_tables(n, programs, incremental=True, on_model=None, prefix=()):
    """Enumerate reduced loop tables of order ``n`` depth first, row-major.

    Returns ``(nodes, leaves, prunes)``; ``prunes[p]`` counts backtracks caused
    by program ``p``.  ``on_model(flat_table)`` returning False stops the run.

    Each undecided ground instance waits in the bucket of the cell depth at
    which it could first change status, and is re-evaluated only when that
    cell is filled.  Buckets are linked lists over a shared entry pool so that
    backtracking is a pop to a saved mark.
    """
    nn = n * n
    T = [-1] * nn
    LD = [-1] * nn
    RD = [-1] * nn
    rowmask = [0] * n
    colmask = [0] * n

    def place(i, j, v):
        T[i * n + j] = v
        LD[i * n + v] = j
        RD[j * n + v] = i
        rowmask[i] |= 1 << v
        colmask[j] |= 1 << v

    def unplace(i, j, v):
        T[i * n + j] = -1
        LD[i * n + v] = -1
        RD[j * n + v] = -1
        rowmask[i] &= ~(1 << v)
        colmask[j] &= ~(1 << v)

    for k in range(n):
        place(0, k, k)
        if k:
            place(k, 0, k)
    free = [(i, j) for i in range(1, n) for j in range(1, n)]
    nfree = len(free)
    full = (1 << n) - 1
    programs = [tuple(p) for p in programs] if incremental else []
    prunes = [0] * len(programs)
    regs = [0] * (1 + max([p[0] + 1 + len(p[1]) for p in programs], default=0))
    stats = {"nodes": 0, "leaves": 0, "stop": False}

    head = [-1] * (nfree + 1)
    e_prog, e_inst, e_next, e_bucket = [], [], [], []

    def push(b, p, a):
        e_prog.append(p)
        e_inst.append(a)
        e_next.append(head[b])
        e_bucket.append(b)
        head[b] = len(e_prog) - 1

    def pop_to(mark):
        while len(e_prog) > mark:
            head[e_bucket.pop()] = e_next.pop()
            e_prog.pop()
            e_inst.pop()

    def process(depth):
        """Re-evaluate instances waiting on cell ``depth``; False on violation."""
        k = head[depth]
        while k >= 0:
            p = e_prog[k]
            s, b = _instance_status(programs[p], e_inst[k], n, T, LD, RD, regs, depth)
            if s == VIOLATED:
                prunes[p] += 1
                return False
            if s == UNKNOWN:
                push(b, p, e_inst[k])
            k = e_next[k]
        return True

    def dfs(depth):
        if depth == nfree:
            stats["leaves"] += 1
            if on_model is not None and on_model(list(T)) is False:
                stats["stop"] = True
            return
        i, j = free[depth]
        cand = full & ~(rowmask[i] | colmask[j])
        v = 0
        while cand:
            if cand & 1:
                place(i, j, v)
                stats["nodes"] += 1
                mark = len(e_prog)
                if process(depth):
                    dfs(depth + 1)
                pop_to(mark)
                unplace(i, j, v)
                if stats["stop"]:
                    return
            cand >>= 1
            v += 1

    start = len(prefix)
    if start > nfree:
        raise ValueError("prefix longer than the free cells")
    for depth, v in enumerate(prefix):
        i, j = free[depth]
        if not 0 <= v < n or (rowmask[i] | colmask[j]) >> v & 1:
            return 0, 0, prunes
        place(i, j, v)
    for p, prog in enumerate(programs):
        for a in range(n ** prog[0]):
            s, b = _instance_status(prog, a, n, T, LD, RD, regs, start - 1)
            if s == VIOLATED:
                prunes[p] += 1
                return stats["nodes"], stats["leaves"], prunes
            if s == UNKNOWN:
                push(b, p, a)
    dfs(start)
    return stats["nodes"], stats["leaves"], prunes


def canonical_table(n, flat):
    """Lexicographically least relabeling of ``flat`` over bijections fixing 0."""
    best = None
    for tail in itertools.permutations(range(1, n)):
        psi = (0,) + tail  # new label i holds old element psi[i]
        phi = [0] * n
        for new, old in enumerate(psi):
            phi[old] = new
        if best is None:
            best = [phi[flat[psi[i] * n + psi[j]]] for i in range(n) for j in range(n)]
            continue
        smaller = False
        for i in range(1, n):
            base = psi[i] * n
            for j in range(1, n):
                v = phi[flat[base + psi[j]]]
                b = best[i * n + j]
                if v != b:
                    smaller = v < b
                    break
            else:
                continue
            break
        if smaller:
            best = [phi[flat[psi[i] * n + psi[j]]] for i in range(n) for j in range(n)]
    return best
