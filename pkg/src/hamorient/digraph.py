"""Digraph core: immutable bitset adjacency plus the counting primitives.

A digraph on n vertices (dense ints 0..n-1) stores one out-neighborhood
bitmask and one in-neighborhood bitmask per vertex. Every counting
operation downstream (degrees, cut sizes, robust neighborhoods) reduces
to mask intersections and popcounts, so these two tuples are the whole
representation. No parallel edges; antiparallel pairs u->v, v->u are fine
and are how "double edges" are modeled.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bitset import bit_list, bits_of, full_mask, mask_of
from .errors import InputError

# hard cap so masks and the numpy sweep tables stay sane
N_MAX = 4096


@dataclass(frozen=True)
class Digraph:
    n: int
    out_adj: tuple[int, ...]
    in_adj: tuple[int, ...]

    @classmethod
    def from_edge_list(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        if n < 0 or n > N_MAX:
            raise InputError(f"vertex count {n} outside supported range 0..{N_MAX}")
        out = [0] * n
        inn = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) has endpoint outside 0..{n - 1}")
            if u == v:
                raise InputError(f"loop edge ({u}, {v}) not allowed")
            if out[u] >> v & 1:
                raise InputError(f"duplicate edge ({u}, {v})")
            out[u] |= 1 << v
            inn[v] |= 1 << u
        return cls(n, tuple(out), tuple(inn))

    @property
    def vertex_mask(self) -> int:
        return full_mask(self.n)

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.out_adj)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out_adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits_of(self.out_adj[u])]

    def out_degree(self, v: int) -> int:
        return self.out_adj[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.in_adj[v].bit_count()

    def degree(self, v: int) -> int:
        return self.out_degree(v) + self.in_degree(v)


@dataclass(frozen=True)
class DegreeProfile:
    out_degrees: tuple[int, ...]
    in_degrees: tuple[int, ...]
    degrees: tuple[int, ...]
    min_total: int       # min over v of d+(v) + d-(v)
    min_semi: int        # min over v of min(d+(v), d-(v))


def degree_profile(g: Digraph) -> DegreeProfile:
    outs = tuple(m.bit_count() for m in g.out_adj)
    ins = tuple(m.bit_count() for m in g.in_adj)
    tot = tuple(o + i for o, i in zip(outs, ins))
    if g.n == 0:
        return DegreeProfile((), (), (), 0, 0)
    return DegreeProfile(
        outs, ins, tot,
        min(tot),
        min(min(o, i) for o, i in zip(outs, ins)),
    )


def cross_counts(g: Digraph, a: int, b: int) -> tuple[int, int, int]:
    """(e_forward, e_backward, e_total) between vertex masks a and b.

    e_forward counts ordered pairs u in a, v in b with edge u->v;
    e_backward counts edges b->a. Masks may overlap; internal edges of the
    overlap then contribute to both directions.
    """
    fwd = sum((g.out_adj[u] & b).bit_count() for u in bits_of(a))
    bwd = sum((g.out_adj[u] & a).bit_count() for u in bits_of(b))
    return fwd, bwd, fwd + bwd


def induced(g: Digraph, mask: int) -> tuple[Digraph, list[int]]:
    """Induced subgraph on the masked vertices, relabeled 0..m-1.

    Returns the subgraph and the sorted original-vertex list; position i of
    the list is the original identity of new vertex i.
    """
    verts = bit_list(mask)
    index = {v: i for i, v in enumerate(verts)}
    out = []
    inn = []
    for v in verts:
        om = 0
        for w in bits_of(g.out_adj[v] & mask):
            om |= 1 << index[w]
        im = 0
        for w in bits_of(g.in_adj[v] & mask):
            im |= 1 << index[w]
        out.append(om)
        inn.append(im)
    return Digraph(len(verts), tuple(out), tuple(inn)), verts


def reverse_digraph(g: Digraph) -> Digraph:
    return Digraph(g.n, g.in_adj, g.out_adj)


def strongly_connected_components(g: Digraph) -> list[int]:
    """SCCs as vertex masks, condensation in topological order.

    Topological means every edge between distinct components goes from an
    earlier list entry to a later one. Ties (incomparable components) are
    broken by smallest contained vertex index, so the output is stable.
    """
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp_of = [-1] * n
    comps: list[list[int]] = []
    counter = 0

    # iterative Tarjan; explicit work stack holds (v, neighbor iterator)
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(bit_list(g.out_adj[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(bit_list(g.out_adj[w]))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = len(comps)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)

    # Kahn over the condensation, heap keyed by smallest member vertex
    k = len(comps)
    succ: list[set[int]] = [set() for _ in range(k)]
    indeg = [0] * k
    for u in range(n):
        cu = comp_of[u]
        for w in bits_of(g.out_adj[u]):
            cw = comp_of[w]
            if cu != cw and cw not in succ[cu]:
                succ[cu].add(cw)
                indeg[cw] += 1
    key = [min(c) for c in comps]
    heap = [(key[i], i) for i in range(k) if indeg[i] == 0]
    heapq.heapify(heap)
    order: list[int] = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, (key[j], j))
    return [mask_of(comps[i]) for i in order]


def double_edge_graph(g: Digraph) -> Digraph:
    """Symmetric subdigraph keeping u->v only when v->u is also present."""
    both = tuple(o & i for o, i in zip(g.out_adj, g.in_adj))
    return Digraph(g.n, both, both)


def is_strongly_connected(g: Digraph) -> bool:
    if g.n <= 1:
        return True
    return len(strongly_connected_components(g)) == 1
