"""Pure-Python graph kernel.

Mirrors the compiled kernel in ``_ckernel.pyx``: one class holding an
integer-only snapshot of a dependency graph, answering the relation
queries the matcher performs in its inner loop.  Node positions are
0..n-1 in word order, edges are (gov, dep, label_id) triples identified
by their index in the edge list, and label masks are ``bytes`` objects
indexed by label id (a zero byte disallows the label, ``None`` allows all).
"""

from __future__ import annotations

import heapq

# Operator codes. Keep in sync with _ckernel.pyx.
OP_DEP = 0        # A < B  : edge B->A
OP_GOV = 1        # A > B  : edge A->B
OP_DESC = 2       # A << B : path B=>A
OP_ANC = 3        # A >> B : path A=>B
OP_NEXT = 4       # A . B  : word index of A == index of B - 1
OP_BEFORE = 5     # A .. B : A precedes B
OP_PREV = 6       # A - B  : word index of A == index of B + 1
OP_AFTER = 7      # A -- B : A follows B
OP_SIB_NEXT = 8   # A $+ B : common governor, A immediately before B
OP_SIB_PREV = 9   # A $- B
OP_SIB_BEFORE = 10  # A $++ B
OP_SIB_AFTER = 11   # A $-- B
OP_GOV_RIGHT = 12   # A >++ B : edge A->B, A precedes B
OP_GOV_LEFT = 13    # A >-- B
OP_DEP_RIGHT = 14   # A <++ B : edge B->A, A precedes B
OP_DEP_LEFT = 15    # A <-- B


class GraphCore:
    """Integer-only relation queries over one graph snapshot."""

    def __init__(self, n: int, idxs: list[int], edges: list[tuple[int, int, int]]):
        self.n = n
        self.m = len(edges)
        self.idxs = list(idxs)
        self.edges = list(edges)
        self._out = [[] for _ in range(n)]  # position -> [edge id]
        self._in = [[] for _ in range(n)]
        for eid, (gov, dep, _lab) in enumerate(self.edges):
            self._out[gov].append(eid)
            self._in[dep].append(eid)
        self._order = self._compute_order()
        self._rank = [0] * n
        for r, v in enumerate(self._order):
            self._rank[v] = r

    # -- construction helpers -------------------------------------------

    def _compute_order(self) -> list[int]:
        # Topological order with ties broken by position; falls back to
        # plain position order when the edge set has a cycle.
        indeg = [0] * self.n
        for _gov, dep, _lab in self.edges:
            indeg[dep] += 1
        frontier = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(frontier)
        order = []
        while frontier:
            v = heapq.heappop(frontier)
            order.append(v)
            for eid in self._out[v]:
                dep = self.edges[eid][1]
                indeg[dep] -= 1
                if indeg[dep] == 0:
                    heapq.heappush(frontier, dep)
        if len(order) < self.n:  # cycle
            return list(range(self.n))
        return order

    # -- basic accessors --------------------------------------------------

    def canonical_positions(self) -> list[int]:
        return list(self._order)

    def rank_of(self, v: int) -> int:
        return self._rank[v]

    def out_edge_ids(self, v: int) -> list[int]:
        return list(self._out[v])

    def in_edge_ids(self, v: int) -> list[int]:
        return list(self._in[v])

    def edge(self, eid: int) -> tuple[int, int, int]:
        return self.edges[eid]

    # -- reachability ------------------------------------------------------

    def _reach(self, start: int, down: bool, mask: bytes | None) -> list[int]:
        # Nodes reachable from start by one or more steps whose edge labels
        # all pass the mask. The start node is included only via a cycle.
        seen = bytearray(self.n)
        stack = []
        adj = self._out if down else self._in
        for eid in adj[start]:
            gov, dep, lab = self.edges[eid]
            if mask is not None and not mask[lab]:
                continue
            nxt = dep if down else gov
            if not seen[nxt]:
                seen[nxt] = 1
                stack.append(nxt)
        while stack:
            v = stack.pop()
            for eid in adj[v]:
                gov, dep, lab = self.edges[eid]
                if mask is not None and not mask[lab]:
                    continue
                nxt = dep if down else gov
                if not seen[nxt]:
                    seen[nxt] = 1
                    stack.append(nxt)
        return [v for v in range(self.n) if seen[v]]

    def descendants(self, v: int) -> list[int]:
        return self._reach(v, True, None)

    def ancestors(self, v: int) -> list[int]:
        return self._reach(v, False, None)

    def _reaches(self, a: int, b: int, mask: bytes | None) -> bool:
        # True when a path a => b (length >= 1) uses only mask-allowed labels.
        seen = bytearray(self.n)
        stack = [a]
        while stack:
            v = stack.pop()
            for eid in self._out[v]:
                _gov, dep, lab = self.edges[eid]
                if mask is not None and not mask[lab]:
                    continue
                if dep == b:
                    return True
                if not seen[dep]:
                    seen[dep] = 1
                    stack.append(dep)
        return False

    def _siblings(self, a: int) -> list[int]:
        # Nodes sharing at least one governor with a (excluding a itself).
        seen = bytearray(self.n)
        for eid in self._in[a]:
            gov = self.edges[eid][0]
            for eid2 in self._out[gov]:
                dep = self.edges[eid2][1]
                if dep != a:
                    seen[dep] = 1
        return [v for v in range(self.n) if seen[v]]

    # -- relation queries --------------------------------------------------

    def _edges_between(self, gov: int, dep: int, mask: bytes | None) -> list[int]:
        out = []
        for eid in self._out[gov]:
            e = self.edges[eid]
            if e[1] == dep and (mask is None or mask[e[2]]):
                out.append(eid)
        return out

    def check(self, op: int, a: int, b: int, mask: bytes | None = None) -> bool:
        idxs = self.idxs
        if op == OP_DEP:
            return bool(self._edges_between(b, a, mask))
        if op == OP_GOV:
            return bool(self._edges_between(a, b, mask))
        if op == OP_DESC:
            return self._reaches(b, a, mask)
        if op == OP_ANC:
            return self._reaches(a, b, mask)
        if op == OP_NEXT:
            return idxs[a] == idxs[b] - 1
        if op == OP_BEFORE:
            return a < b
        if op == OP_PREV:
            return idxs[a] == idxs[b] + 1
        if op == OP_AFTER:
            return a > b
        if op in (OP_SIB_NEXT, OP_SIB_PREV, OP_SIB_BEFORE, OP_SIB_AFTER):
            shared = any(
                self._edges_between(self.edges[eid][0], b, None)
                for eid in self._in[a]
            )
            if not shared:
                return False
            if op == OP_SIB_NEXT:
                return idxs[a] == idxs[b] - 1
            if op == OP_SIB_PREV:
                return idxs[a] == idxs[b] + 1
            if op == OP_SIB_BEFORE:
                return a < b
            return a > b
        if op == OP_GOV_RIGHT:
            return a < b and bool(self._edges_between(a, b, mask))
        if op == OP_GOV_LEFT:
            return a > b and bool(self._edges_between(a, b, mask))
        if op == OP_DEP_RIGHT:
            return a < b and bool(self._edges_between(b, a, mask))
        if op == OP_DEP_LEFT:
            return a > b and bool(self._edges_between(b, a, mask))
        raise ValueError(f"unknown operator code {op}")

    def witnesses(self, op: int, a: int, b: int, mask: bytes | None = None) -> list[int]:
        """Edge ids witnessing the relation; empty for pure-order operators.

        For the transitive operators the witnesses are the edges incident
        to a that begin a qualifying path.
        """
        if op == OP_DEP or (op in (OP_DEP_RIGHT, OP_DEP_LEFT) and self.check(op, a, b, mask)):
            return self._edges_between(b, a, mask)
        if op == OP_GOV or (op in (OP_GOV_RIGHT, OP_GOV_LEFT) and self.check(op, a, b, mask)):
            return self._edges_between(a, b, mask)
        if op == OP_DESC:
            out = []
            for eid in self._in[a]:
                gov, _dep, lab = self.edges[eid]
                if mask is not None and not mask[lab]:
                    continue
                if gov == b or self._reaches(b, gov, mask):
                    out.append(eid)
            return out
        if op == OP_ANC:
            out = []
            for eid in self._out[a]:
                _gov, dep, lab = self.edges[eid]
                if mask is not None and not mask[lab]:
                    continue
                if dep == b or self._reaches(dep, b, mask):
                    out.append(eid)
            return out
        return []

    def candidates(self, op: int, a: int, mask: bytes | None = None) -> list[int]:
        """All b satisfying check(op, a, b, mask), ordered by canonical rank."""
        idxs = self.idxs
        if op == OP_DEP:
            found = {self.edges[eid][0] for eid in self._in[a]
                     if mask is None or mask[self.edges[eid][2]]}
        elif op == OP_GOV:
            found = {self.edges[eid][1] for eid in self._out[a]
                     if mask is None or mask[self.edges[eid][2]]}
        elif op == OP_DESC:
            found = set(self._reach(a, False, mask))
        elif op == OP_ANC:
            found = set(self._reach(a, True, mask))
        elif op == OP_NEXT:
            found = {v for v in range(self.n) if idxs[a] == idxs[v] - 1}
        elif op == OP_BEFORE:
            found = set(range(a + 1, self.n))
        elif op == OP_PREV:
            found = {v for v in range(self.n) if idxs[a] == idxs[v] + 1}
        elif op == OP_AFTER:
            found = set(range(a))
        elif op in (OP_SIB_NEXT, OP_SIB_PREV, OP_SIB_BEFORE, OP_SIB_AFTER):
            sibs = self._siblings(a)
            if op == OP_SIB_NEXT:
                found = {v for v in sibs if idxs[a] == idxs[v] - 1}
            elif op == OP_SIB_PREV:
                found = {v for v in sibs if idxs[a] == idxs[v] + 1}
            elif op == OP_SIB_BEFORE:
                found = {v for v in sibs if a < v}
            else:
                found = {v for v in sibs if a > v}
        elif op in (OP_GOV_RIGHT, OP_GOV_LEFT):
            found = {self.edges[eid][1] for eid in self._out[a]
                     if mask is None or mask[self.edges[eid][2]]}
            found = {v for v in found if (a < v if op == OP_GOV_RIGHT else a > v)}
        elif op in (OP_DEP_RIGHT, OP_DEP_LEFT):
            found = {self.edges[eid][0] for eid in self._in[a]
                     if mask is None or mask[self.edges[eid][2]]}
            found = {v for v in found if (a < v if op == OP_DEP_RIGHT else a > v)}
        else:
            raise ValueError(f"unknown operator code {op}")
        return [v for v in self._order if v in found]
