# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled graph kernel.

Behaviorally identical to ``pybackend.GraphCore``; see that module for the
interface contract.  Adjacency is stored in CSR form over C int arrays and
the traversals run without touching Python objects.
"""

from cpython cimport array
import array

cdef enum:
    OP_DEP = 0
    OP_GOV = 1
    OP_DESC = 2
    OP_ANC = 3
    OP_NEXT = 4
    OP_BEFORE = 5
    OP_PREV = 6
    OP_AFTER = 7
    OP_SIB_NEXT = 8
    OP_SIB_PREV = 9
    OP_SIB_BEFORE = 10
    OP_SIB_AFTER = 11
    OP_GOV_RIGHT = 12
    OP_GOV_LEFT = 13
    OP_DEP_RIGHT = 14
    OP_DEP_LEFT = 15


cdef array.array _ints(values):
    cdef array.array out = array.array("i", values)
    if len(out) == 0:
        out = array.array("i", [0])  # keep the buffer non-NULL
    return out


cdef class GraphCore:
    cdef public int n, m
    cdef array.array _idxs, _eg, _ed, _el
    cdef array.array _out_start, _out_eid, _in_start, _in_eid
    cdef array.array _order, _rank
    cdef int[:] idxs, eg, ed, el
    cdef int[:] out_start, out_eid, in_start, in_eid
    cdef int[:] order_v, rank_v

    def __init__(self, int n, idxs, edges):
        cdef int i, eid, gov, dep
        self.n = n
        self.m = len(edges)
        self._idxs = _ints(idxs)
        self._eg = _ints([e[0] for e in edges])
        self._ed = _ints([e[1] for e in edges])
        self._el = _ints([e[2] for e in edges])
        self.idxs = self._idxs
        self.eg = self._eg
        self.ed = self._ed
        self.el = self._el

        out_deg = [0] * (n + 1)
        in_deg = [0] * (n + 1)
        for eid in range(self.m):
            out_deg[self.eg[eid]] += 1
            in_deg[self.ed[eid]] += 1
        out_start = [0] * (n + 1)
        in_start = [0] * (n + 1)
        for i in range(n):
            out_start[i + 1] = out_start[i] + out_deg[i]
            in_start[i + 1] = in_start[i] + in_deg[i]
        self._out_start = _ints(out_start)
        self._in_start = _ints(in_start)
        out_eid = [0] * self.m
        in_eid = [0] * self.m
        fill_out = list(out_start[:n])
        fill_in = list(in_start[:n])
        for eid in range(self.m):
            gov = self.eg[eid]
            dep = self.ed[eid]
            out_eid[fill_out[gov]] = eid
            fill_out[gov] += 1
            in_eid[fill_in[dep]] = eid
            fill_in[dep] += 1
        self._out_eid = _ints(out_eid)
        self._in_eid = _ints(in_eid)
        self.out_start = self._out_start
        self.out_eid = self._out_eid
        self.in_start = self._in_start
        self.in_eid = self._in_eid
        self._compute_order()

    cdef void _compute_order(self):
        cdef int i, eid, v, best, produced = 0
        indeg = array.array("i", bytes(4 * max(self.n, 1)))
        used = bytearray(self.n)
        order = []
        cdef int[:] indeg_v = indeg
        for eid in range(self.m):
            indeg_v[self.ed[eid]] += 1
        while produced < self.n:
            best = -1
            for v in range(self.n):
                if not used[v] and indeg_v[v] == 0:
                    best = v
                    break
            if best < 0:  # cycle: fall back to word order
                order = list(range(self.n))
                break
            used[best] = 1
            order.append(best)
            produced += 1
            for i in range(self.out_start[best], self.out_start[best + 1]):
                indeg_v[self.ed[self.out_eid[i]]] -= 1
        self._order = _ints(order)
        rank = [0] * self.n
        for i in range(len(order)):
            rank[order[i]] = i
        self._rank = _ints(rank)
        self.order_v = self._order
        self.rank_v = self._rank

    # -- basic accessors --------------------------------------------------

    def canonical_positions(self):
        return [self.order_v[i] for i in range(self.n)]

    def rank_of(self, int v):
        return self.rank_v[v]

    def out_edge_ids(self, int v):
        return [self.out_eid[i] for i in range(self.out_start[v], self.out_start[v + 1])]

    def in_edge_ids(self, int v):
        return [self.in_eid[i] for i in range(self.in_start[v], self.in_start[v + 1])]

    def edge(self, int eid):
        return (self.eg[eid], self.ed[eid], self.el[eid])

    # -- reachability ------------------------------------------------------

    cdef bint _lab_ok(self, int eid, const unsigned char[:] mask):
        return mask is None or mask[self.el[eid]] != 0

    cdef bytearray _reach_seen(self, int start, bint down, const unsigned char[:] mask):
        cdef int v, i, eid, nxt, top = 0
        seen = bytearray(self.n)
        stack = array.array("i", bytes(4 * max(self.n, 1)))
        cdef int[:] stack_v = stack
        v = start
        while True:
            if down:
                for i in range(self.out_start[v], self.out_start[v + 1]):
                    eid = self.out_eid[i]
                    if not self._lab_ok(eid, mask):
                        continue
                    nxt = self.ed[eid]
                    if not seen[nxt]:
                        seen[nxt] = 1
                        stack_v[top] = nxt
                        top += 1
            else:
                for i in range(self.in_start[v], self.in_start[v + 1]):
                    eid = self.in_eid[i]
                    if not self._lab_ok(eid, mask):
                        continue
                    nxt = self.eg[eid]
                    if not seen[nxt]:
                        seen[nxt] = 1
                        stack_v[top] = nxt
                        top += 1
            if top == 0:
                break
            top -= 1
            v = stack_v[top]
        return seen

    def descendants(self, int v):
        seen = self._reach_seen(v, True, None)
        return [i for i in range(self.n) if seen[i]]

    def ancestors(self, int v):
        seen = self._reach_seen(v, False, None)
        return [i for i in range(self.n) if seen[i]]

    cdef bint _reaches(self, int a, int b, const unsigned char[:] mask):
        cdef int v, i, eid, dep, top = 0
        seen = bytearray(self.n)
        stack = array.array("i", bytes(4 * max(self.n, 1)))
        cdef int[:] stack_v = stack
        v = a
        while True:
            for i in range(self.out_start[v], self.out_start[v + 1]):
                eid = self.out_eid[i]
                if not self._lab_ok(eid, mask):
                    continue
                dep = self.ed[eid]
                if dep == b:
                    return True
                if not seen[dep]:
                    seen[dep] = 1
                    stack_v[top] = dep
                    top += 1
            if top == 0:
                return False
            top -= 1
            v = stack_v[top]

    cdef bytearray _sibling_seen(self, int a):
        cdef int i, j, gov, dep
        seen = bytearray(self.n)
        for i in range(self.in_start[a], self.in_start[a + 1]):
            gov = self.eg[self.in_eid[i]]
            for j in range(self.out_start[gov], self.out_start[gov + 1]):
                dep = self.ed[self.out_eid[j]]
                if dep != a:
                    seen[dep] = 1
        return seen

    cdef bint _has_edge(self, int gov, int dep, const unsigned char[:] mask):
        cdef int i, eid
        for i in range(self.out_start[gov], self.out_start[gov + 1]):
            eid = self.out_eid[i]
            if self.ed[eid] == dep and self._lab_ok(eid, mask):
                return True
        return False

    # -- relation queries --------------------------------------------------

    def check(self, int op, int a, int b, mask=None):
        cdef const unsigned char[:] mv = mask
        cdef bint shared
        if op == OP_DEP:
            return self._has_edge(b, a, mv)
        if op == OP_GOV:
            return self._has_edge(a, b, mv)
        if op == OP_DESC:
            return self._reaches(b, a, mv)
        if op == OP_ANC:
            return self._reaches(a, b, mv)
        if op == OP_NEXT:
            return self.idxs[a] == self.idxs[b] - 1
        if op == OP_BEFORE:
            return a < b
        if op == OP_PREV:
            return self.idxs[a] == self.idxs[b] + 1
        if op == OP_AFTER:
            return a > b
        if OP_SIB_NEXT <= op <= OP_SIB_AFTER:
            shared = self._sibling_seen(a)[b] != 0
            if not shared:
                return False
            if op == OP_SIB_NEXT:
                return self.idxs[a] == self.idxs[b] - 1
            if op == OP_SIB_PREV:
                return self.idxs[a] == self.idxs[b] + 1
            if op == OP_SIB_BEFORE:
                return a < b
            return a > b
        if op == OP_GOV_RIGHT:
            return a < b and self._has_edge(a, b, mv)
        if op == OP_GOV_LEFT:
            return a > b and self._has_edge(a, b, mv)
        if op == OP_DEP_RIGHT:
            return a < b and self._has_edge(b, a, mv)
        if op == OP_DEP_LEFT:
            return a > b and self._has_edge(b, a, mv)
        raise ValueError(f"unknown operator code {op}")

    def witnesses(self, int op, int a, int b, mask=None):
        cdef const unsigned char[:] mv = mask
        cdef int i, eid, gov, dep
        out = []
        if op == OP_DEP or ((op == OP_DEP_RIGHT or op == OP_DEP_LEFT)
                            and self.check(op, a, b, mask)):
            for i in range(self.out_start[b], self.out_start[b + 1]):
                eid = self.out_eid[i]
                if self.ed[eid] == a and self._lab_ok(eid, mv):
                    out.append(eid)
            out.sort()
            return out
        if op == OP_GOV or ((op == OP_GOV_RIGHT or op == OP_GOV_LEFT)
                            and self.check(op, a, b, mask)):
            for i in range(self.out_start[a], self.out_start[a + 1]):
                eid = self.out_eid[i]
                if self.ed[eid] == b and self._lab_ok(eid, mv):
                    out.append(eid)
            out.sort()
            return out
        if op == OP_DESC:
            for i in range(self.in_start[a], self.in_start[a + 1]):
                eid = self.in_eid[i]
                if not self._lab_ok(eid, mv):
                    continue
                gov = self.eg[eid]
                if gov == b or self._reaches(b, gov, mv):
                    out.append(eid)
            out.sort()
            return out
        if op == OP_ANC:
            for i in range(self.out_start[a], self.out_start[a + 1]):
                eid = self.out_eid[i]
                if not self._lab_ok(eid, mv):
                    continue
                dep = self.ed[eid]
                if dep == b or self._reaches(dep, b, mv):
                    out.append(eid)
            out.sort()
            return out
        return out

    def candidates(self, int op, int a, mask=None):
        cdef const unsigned char[:] mv = mask
        cdef int i, v, eid
        found = bytearray(self.n)
        if op == OP_DEP:
            for i in range(self.in_start[a], self.in_start[a + 1]):
                eid = self.in_eid[i]
                if self._lab_ok(eid, mv):
                    found[self.eg[eid]] = 1
        elif op == OP_GOV:
            for i in range(self.out_start[a], self.out_start[a + 1]):
                eid = self.out_eid[i]
                if self._lab_ok(eid, mv):
                    found[self.ed[eid]] = 1
        elif op == OP_DESC:
            found = self._reach_seen(a, False, mv)
        elif op == OP_ANC:
            found = self._reach_seen(a, True, mv)
        elif op == OP_NEXT:
            for v in range(self.n):
                if self.idxs[a] == self.idxs[v] - 1:
                    found[v] = 1
        elif op == OP_BEFORE:
            for v in range(a + 1, self.n):
                found[v] = 1
        elif op == OP_PREV:
            for v in range(self.n):
                if self.idxs[a] == self.idxs[v] + 1:
                    found[v] = 1
        elif op == OP_AFTER:
            for v in range(a):
                found[v] = 1
        elif OP_SIB_NEXT <= op <= OP_SIB_AFTER:
            sibs = self._sibling_seen(a)
            for v in range(self.n):
                if not sibs[v]:
                    continue
                if op == OP_SIB_NEXT:
                    if self.idxs[a] == self.idxs[v] - 1:
                        found[v] = 1
                elif op == OP_SIB_PREV:
                    if self.idxs[a] == self.idxs[v] + 1:
                        found[v] = 1
                elif op == OP_SIB_BEFORE:
                    if a < v:
                        found[v] = 1
                elif a > v:
                    found[v] = 1
        elif op == OP_GOV_RIGHT or op == OP_GOV_LEFT:
            for i in range(self.out_start[a], self.out_start[a + 1]):
                eid = self.out_eid[i]
                if self._lab_ok(eid, mv):
                    v = self.ed[eid]
                    if a < v if op == OP_GOV_RIGHT else a > v:
                        found[v] = 1
        elif op == OP_DEP_RIGHT or op == OP_DEP_LEFT:
            for i in range(self.in_start[a], self.in_start[a + 1]):
                eid = self.in_eid[i]
                if self._lab_ok(eid, mv):
                    v = self.eg[eid]
                    if a < v if op == OP_DEP_RIGHT else a > v:
                        found[v] = 1
        else:
            raise ValueError(f"unknown operator code {op}")
        out = []
        for i in range(self.n):  # canonical order
            v = self.order_v[i]
            if found[v]:
                out.append(v)
        return out
