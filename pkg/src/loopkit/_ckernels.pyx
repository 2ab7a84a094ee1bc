# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search and canonicalization kernels.

Same API and semantics as ``_pykernels``: identical table order and
statistics.  Keep the two in step.
"""

from libc.stdlib cimport malloc, free, calloc, realloc

cdef enum:
    OP_MUL = 0
    OP_LDIV = 1
    OP_RDIV = 2
    OP_INV = 3

cdef enum:
    UNKNOWN = 0
    SATISFIED = 1
    VIOLATED = 2


cdef inline int _row_next(int u, int filled, int m) nogil:
    cdef int d = (u - 1) * m
    return d if d > filled + 1 else filled + 1


cdef inline int _col_next(int w, int filled, int m) nogil:
    cdef int t = filled + 2 - w
    cdef int k = 0
    if t > 0:
        k = (t + m - 1) // m
    return k * m + w - 1


cdef class _Search:
    cdef int n, nfree, nprog, stop, block
    cdef long long nodes, leaves
    cdef int *T
    cdef int *LD
    cdef int *RD
    cdef unsigned long long *rowmask
    cdef unsigned long long *colmask
    cdef int *free_i
    cdef int *free_j
    # programs, flattened
    cdef int *p_nvars
    cdef int *p_ninstr
    cdef int *p_lhs
    cdef int *p_rhs
    cdef int *p_instr_off
    cdef int *instrs          # 3 ints per instruction
    cdef long long *prunes
    # waiting instances: one linked list per cell depth over a shared pool
    cdef int *head
    cdef int *e_prog
    cdef int *e_inst
    cdef int *e_next
    cdef int *e_bucket
    cdef int top, cap
    cdef int *regs
    cdef object on_model

    def __cinit__(self):
        self.T = NULL
        self.e_prog = NULL
        self.e_inst = NULL
        self.e_next = NULL
        self.e_bucket = NULL

    def __dealloc__(self):
        free(self.T); free(self.LD); free(self.RD)
        free(self.rowmask); free(self.colmask)
        free(self.free_i); free(self.free_j)
        free(self.p_nvars); free(self.p_ninstr); free(self.p_lhs); free(self.p_rhs)
        free(self.p_instr_off); free(self.instrs); free(self.prunes)
        free(self.head); free(self.e_prog); free(self.e_inst); free(self.e_next); free(self.e_bucket)
        free(self.regs)

    cdef void place(self, int i, int j, int v) nogil:
        cdef int n = self.n
        self.T[i * n + j] = v
        self.LD[i * n + v] = j
        self.RD[j * n + v] = i
        self.rowmask[i] |= (1ULL << v)
        self.colmask[j] |= (1ULL << v)

    cdef void unplace(self, int i, int j, int v) nogil:
        cdef int n = self.n
        self.T[i * n + j] = -1
        self.LD[i * n + v] = -1
        self.RD[j * n + v] = -1
        self.rowmask[i] &= ~(1ULL << v)
        self.colmask[j] &= ~(1ULL << v)

    cdef int grow(self) except -1:
        cdef int cap = self.cap * 2 if self.cap else 1024
        cdef int *a = <int *> realloc(self.e_prog, cap * sizeof(int))
        if a == NULL:
            raise MemoryError()
        self.e_prog = a
        a = <int *> realloc(self.e_inst, cap * sizeof(int))
        if a == NULL:
            raise MemoryError()
        self.e_inst = a
        a = <int *> realloc(self.e_next, cap * sizeof(int))
        if a == NULL:
            raise MemoryError()
        self.e_next = a
        a = <int *> realloc(self.e_bucket, cap * sizeof(int))
        if a == NULL:
            raise MemoryError()
        self.e_bucket = a
        self.cap = cap
        return 0

    cdef int push(self, int b, int p, int a) except -1:
        if self.top == self.cap:
            self.grow()
        self.e_prog[self.top] = p
        self.e_inst[self.top] = a
        self.e_next[self.top] = self.head[b]
        self.e_bucket[self.top] = b
        self.head[b] = self.top
        self.top += 1
        return 0

    cdef void pop_to(self, int mark) nogil:
        while self.top > mark:
            self.top -= 1
            self.head[self.e_bucket[self.top]] = self.e_next[self.top]

    cdef int status(self, int p, int a, int filled) nogil:
        """Status of one ground instance; sets ``self.block`` when UNKNOWN."""
        cdef int n = self.n
        cdef int m = n - 1
        cdef int nv = self.p_nvars[p]
        cdef int ni = self.p_ninstr[p]
        cdef int *ins = self.instrs + 3 * self.p_instr_off[p]
        cdef int *regs = self.regs
        cdef int v, k, op, u, w, val, right, left, r, b
        cdef int block = m * m
        for v in range(nv):
            regs[v] = a % n
            a = a // n
        regs[nv] = 0
        r = nv + 1
        for k in range(ni):
            op = ins[3 * k]
            u = regs[ins[3 * k + 1]]
            if op == OP_INV:
                if u < 0:
                    val = -1
                else:
                    right = self.LD[u * n]
                    left = self.RD[u * n]
                    if right >= 0 and left >= 0:
                        if right != left:
                            return VIOLATED
                        val = right
                    else:
                        val = -1
                        if right < 0:
                            b = _row_next(u, filled, m)
                            if b < block:
                                block = b
                        if left < 0:
                            b = _col_next(u, filled, m)
                            if b < block:
                                block = b
            else:
                w = regs[ins[3 * k + 2]]
                if u < 0 or w < 0:
                    val = -1
                elif op == OP_MUL:
                    val = self.T[u * n + w]
                    if val < 0:
                        b = (u - 1) * m + w - 1
                        if b < block:
                            block = b
                elif op == OP_LDIV:
                    val = self.LD[u * n + w]
                    if val < 0:
                        b = _row_next(u, filled, m)
                        if b < block:
                            block = b
                else:
                    val = self.RD[w * n + u]
                    if val < 0:
                        b = _col_next(w, filled, m)
                        if b < block:
                            block = b
            regs[r] = val
            r += 1
        u = regs[self.p_lhs[p]]
        w = regs[self.p_rhs[p]]
        if u < 0 or w < 0:
            self.block = block
            return UNKNOWN
        if u == w:
            return SATISFIED
        return VIOLATED

    cdef int process(self, int depth) except -1:
        """Re-evaluate instances waiting on cell ``depth``; 0 on violation."""
        cdef int k = self.head[depth]
        cdef int p, a, s
        while k >= 0:
            p = self.e_prog[k]
            a = self.e_inst[k]
            s = self.status(p, a, depth)
            if s == VIOLATED:
                self.prunes[p] += 1
                return 0
            if s == UNKNOWN:
                self.push(self.block, p, a)
            k = self.e_next[k]
        return 1

    cdef int emit(self) except -1:
        cdef int k
        cdef list out = [self.T[k] for k in range(self.n * self.n)]
        self.leaves += 1
        if self.on_model is not None:
            if self.on_model(out) is False:
                self.stop = 1
        return 0

    cdef int dfs(self, int depth) except -1:
        cdef int i, j, v, mark
        cdef unsigned long long cand, full
        if depth == self.nfree:
            self.emit()
            return 0
        i = self.free_i[depth]
        j = self.free_j[depth]
        if self.n == 64:
            full = ~0ULL
        else:
            full = (1ULL << self.n) - 1
        cand = full & ~(self.rowmask[i] | self.colmask[j])
        v = 0
        while cand:
            if cand & 1ULL:
                self.place(i, j, v)
                self.nodes += 1
                mark = self.top
                if self.process(depth):
                    self.dfs(depth + 1)
                self.pop_to(mark)
                self.unplace(i, j, v)
                if self.stop:
                    return 0
            cand >>= 1
            v += 1
        return 0


def search_tables(int n, programs, bint incremental=True, on_model=None, prefix=()):
    """See ``_pykernels.search_tables``."""
    cdef _Search s = _Search()
    cdef int nn = n * n
    cdef int k, i, j, p, t, total, off, d, v, nvars, maxregs, start, st
    cdef long long ninst, a
    if n < 1 or n > 64:
        raise ValueError("order out of kernel range")
    s.n = n
    s.on_model = on_model
    s.T = <int *> malloc(nn * sizeof(int))
    s.LD = <int *> malloc(nn * sizeof(int))
    s.RD = <int *> malloc(nn * sizeof(int))
    s.rowmask = <unsigned long long *> calloc(n, sizeof(unsigned long long))
    s.colmask = <unsigned long long *> calloc(n, sizeof(unsigned long long))
    for k in range(nn):
        s.T[k] = -1
        s.LD[k] = -1
        s.RD[k] = -1
    for k in range(n):
        s.place(0, k, k)
        if k:
            s.place(k, 0, k)
    s.nfree = (n - 1) * (n - 1)
    s.free_i = <int *> malloc((s.nfree + 1) * sizeof(int))
    s.free_j = <int *> malloc((s.nfree + 1) * sizeof(int))
    t = 0
    for i in range(1, n):
        for j in range(1, n):
            s.free_i[t] = i
            s.free_j[t] = j
            t += 1
    s.head = <int *> malloc((s.nfree + 1) * sizeof(int))
    for k in range(s.nfree + 1):
        s.head[k] = -1

    progs = [tuple(q) for q in programs] if incremental else []
    s.nprog = len(progs)
    np_ = max(s.nprog, 1)
    s.p_nvars = <int *> malloc(np_ * sizeof(int))
    s.p_ninstr = <int *> malloc(np_ * sizeof(int))
    s.p_lhs = <int *> malloc(np_ * sizeof(int))
    s.p_rhs = <int *> malloc(np_ * sizeof(int))
    s.p_instr_off = <int *> malloc(np_ * sizeof(int))
    s.prunes = <long long *> calloc(np_, sizeof(long long))
    total = sum(len(q[1]) for q in progs)
    s.instrs = <int *> malloc(max(3 * total, 1) * sizeof(int))
    off = 0
    maxregs = 1
    for p in range(s.nprog):
        nvars, ins, lhs, rhs = progs[p]
        s.p_nvars[p] = nvars
        s.p_ninstr[p] = len(ins)
        s.p_lhs[p] = lhs
        s.p_rhs[p] = rhs
        s.p_instr_off[p] = off
        for (op, a_, b_) in ins:
            s.instrs[3 * off] = op
            s.instrs[3 * off + 1] = a_
            s.instrs[3 * off + 2] = b_
            off += 1
        maxregs = max(maxregs, nvars + 1 + len(ins))
    s.regs = <int *> malloc(maxregs * sizeof(int))

    start = len(prefix)
    if start > s.nfree:
        raise ValueError("prefix longer than the free cells")
    for d in range(start):
        v = prefix[d]
        i = s.free_i[d]
        j = s.free_j[d]
        if v < 0 or v >= n or ((s.rowmask[i] | s.colmask[j]) >> v) & 1ULL:
            return 0, 0, [0] * s.nprog
        s.place(i, j, v)
    for p in range(s.nprog):
        ninst = (<long long> n) ** s.p_nvars[p]
        if ninst > 2000000000:
            raise ValueError("too many ground instances")
        for a in range(ninst):
            st = s.status(p, <int> a, start - 1)
            if st == VIOLATED:
                s.prunes[p] += 1
                return s.nodes, s.leaves, [s.prunes[k] for k in range(s.nprog)]
            if st == UNKNOWN:
                s.push(s.block, p, <int> a)
    s.dfs(start)
    return s.nodes, s.leaves, [s.prunes[p] for p in range(s.nprog)]


cdef int _next_perm(int *a, int m) nogil:
    cdef int i = m - 2, j, t
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return 0
    j = m - 1
    while a[j] <= a[i]:
        j -= 1
    t = a[i]; a[i] = a[j]; a[j] = t
    i += 1
    j = m - 1
    while i < j:
        t = a[i]; a[i] = a[j]; a[j] = t
        i += 1
        j -= 1
    return 1


def canonical_table(int n, flat):
    """See ``_pykernels.canonical_table``."""
    cdef int nn = n * n
    cdef int *src = <int *> malloc(nn * sizeof(int))
    cdef int *best = <int *> malloc(nn * sizeof(int))
    cdef int *psi = <int *> malloc(n * sizeof(int))
    cdef int *phi = <int *> malloc(n * sizeof(int))
    cdef int i, j, k, v, b, smaller, decided, first = 1
    try:
        for k in range(nn):
            src[k] = flat[k]
        for k in range(n):
            psi[k] = k
        while True:
            for k in range(n):
                phi[psi[k]] = k
            if first:
                for i in range(n):
                    for j in range(n):
                        best[i * n + j] = phi[src[psi[i] * n + psi[j]]]
                first = 0
            else:
                smaller = 0
                decided = 0
                for i in range(1, n):
                    for j in range(1, n):
                        v = phi[src[psi[i] * n + psi[j]]]
                        b = best[i * n + j]
                        if v != b:
                            smaller = v < b
                            decided = 1
                            break
                    if decided:
                        break
                if smaller:
                    for i in range(n):
                        for j in range(n):
                            best[i * n + j] = phi[src[psi[i] * n + psi[j]]]
            if n <= 2 or not _next_perm(psi + 1, n - 1):
                break
        return [best[k] for k in range(nn)]
    finally:
        free(src); free(best); free(psi); free(phi)
