"""Exact pattern-embedding search and the independent validity checker.

exact_embed answers "does this host contain an injective, orientation
respecting copy of this cycle/path pattern" definitively whenever it
finishes inside its deadline: a "found" comes with the mapping, a "none"
means the search space was exhausted. Three cooperating engines:

  1. backtracking with fewest-candidates-first position selection and
     bitset forward checking (fast on satisfiable dense instances),
  2. a subset dynamic program over (used-set, last-vertex) states for
     spanning patterns on at most 16 usable vertices (merges the
     exponential backtrack tree on refutations),
  3. for fully directed cycle patterns, restriction to single strongly
     connected components first (a directed cycle cannot cross them).

Spanning searches are capped at 64 vertices; anything larger times out in
practice and callers are told up front.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .bitset import bit_list, bits_of
from .digraph import Digraph, strongly_connected_components
from .errors import CapabilityError, InputError
from .patterns import CyclePattern, PathPattern

SPANNING_CAP = 64
DP_CAP = 16
BT_STAGE_NODES = 20_000
DP_STATE_BUDGET = 400_000


@dataclass(frozen=True)
class EmbedResult:
    status: str                        # found | none | timeout
    mapping: tuple[int, ...] | None    # position -> vertex when found
    nodes: int
    elapsed: float
    method: str

    @property
    def found(self) -> bool:
        return self.status == "found"


@dataclass(frozen=True)
class CheckReport:
    valid: bool
    errors: tuple[str, ...]


def pattern_edges(pattern) -> list[tuple[int, int]]:
    """Directed edges (as position pairs) the pattern demands."""
    if isinstance(pattern, CyclePattern):
        return [pattern.edge(i) for i in range(pattern.n)]
    return [pattern.edge(i) for i in range(pattern.length - 1)]


def pattern_size(pattern) -> int:
    return pattern.n if isinstance(pattern, CyclePattern) else pattern.length


def validate_embedding(host: Digraph, pattern, mapping, *, spanning: bool = False,
                       allowed: int | None = None) -> CheckReport:
    """Independent check that mapping realizes the pattern in the host.

    Deliberately naive: recomputes everything from the raw adjacency, so
    it shares no code path with the search engines it audits.
    """
    errors = []
    size = pattern_size(pattern)
    if mapping is None or len(mapping) != size:
        return CheckReport(False, (f"mapping covers {0 if mapping is None else len(mapping)} "
                                   f"of {size} positions",))
    seen = set()
    for pos, v in enumerate(mapping):
        if not 0 <= v < host.n:
            errors.append(f"position {pos} mapped to out-of-range vertex {v}")
        elif v in seen:
            errors.append(f"vertex {v} used twice")
        elif allowed is not None and not allowed >> v & 1:
            errors.append(f"position {pos} mapped outside the allowed set")
        seen.add(v)
    if not errors:
        for a, b in pattern_edges(pattern):
            if not host.has_edge(mapping[a], mapping[b]):
                errors.append(f"missing host edge {mapping[a]}->{mapping[b]} "
                              f"for pattern positions {a}->{b}")
    if spanning and not errors:
        pool = host.n if allowed is None else allowed.bit_count()
        if len(set(mapping)) != pool:
            errors.append(f"mapping spans {len(set(mapping))} of {pool} vertices")
    return CheckReport(not errors, tuple(errors))


def _pattern_adjacency(pattern) -> list[list[tuple[int, int]]]:
    """adj[p] lists (q, mode): mode 0 means arc p->q, mode 1 means q->p."""
    size = pattern_size(pattern)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(size)]
    for a, b in pattern_edges(pattern):
        adj[a].append((b, 0))
        adj[b].append((a, 1))
    return adj


def _static_filter(host: Digraph, adj, allowed: int) -> list[int]:
    """Per-position mask of hosts with enough in/out degree to sit there."""
    need_masks = {}
    out_deg = [m.bit_count() for m in host.out_adj]
    in_deg = [m.bit_count() for m in host.in_adj]
    filt = []
    for entries in adj:
        no = sum(1 for _, m in entries if m == 0)
        ni = len(entries) - no
        key = (no, ni)
        if key not in need_masks:
            m = 0
            for v in range(host.n):
                if out_deg[v] >= no and in_deg[v] >= ni:
                    m |= 1 << v
            need_masks[key] = m
        filt.append(need_masks[key] & allowed)
    return filt


class _Budget:
    __slots__ = ("t_end", "node_cap", "nodes")

    def __init__(self, t_end: float, node_cap: int | None):
        self.t_end = t_end
        self.node_cap = node_cap
        self.nodes = 0


def _backtrack(host: Digraph, adj, filt, pins: dict[int, int], allowed: int,
               budget: _Budget) -> tuple[str, tuple[int, ...] | None]:
    size = len(adj)
    out_adj = host.out_adj
    in_adj = host.in_adj
    assign = [-1] * size
    used = 0
    for p, v in pins.items():
        assign[p] = v
        used |= 1 << v
    remaining = size - len(pins)
    if remaining == 0:
        return "found", tuple(assign)

    front = {p for p in range(size)
             if assign[p] < 0 and any(assign[q] >= 0 for q, _ in adj[p])}

    def cand(p: int) -> int:
        c = filt[p] & ~used
        for q, mode in adj[p]:
            w = assign[q]
            if w >= 0:
                c &= in_adj[w] if mode == 0 else out_adj[w]
                if not c:
                    return 0
        return c

    def select() -> tuple[int, int]:
        if front:
            best_p, best_c, best_k = -1, 0, 1 << 62
            for p in sorted(front):
                c = cand(p)
                k = c.bit_count()
                if k < best_k:
                    best_p, best_c, best_k = p, c, k
                    if k == 0:
                        break
            return best_p, best_c
        for p in range(size):
            if assign[p] < 0:
                return p, filt[p] & ~used
        return -1, 0

    p0, c0 = select()
    stack: list[list[int]] = [[p0, c0, -1]]    # position, candidates left, tried vertex
    nodes = budget.nodes
    node_cap = budget.node_cap
    t_end = budget.t_end
    check_at = nodes + 2048

    while stack:
        ent = stack[-1]
        p = ent[0]
        tried = ent[2]
        if tried >= 0:
            # undo the previous attempt at this level
            used ^= 1 << tried
            assign[p] = -1
            ent[2] = -1
            if any(assign[q] >= 0 for q, _ in adj[p]):
                front.add(p)
            for q, _ in adj[p]:
                if q in front and not any(assign[r] >= 0 for r, _ in adj[q]):
                    front.discard(q)
        c = ent[1]
        if not c:
            stack.pop()
            continue
        low = c & -c
        ent[1] = c ^ low
        v = low.bit_length() - 1
        nodes += 1
        if nodes >= check_at:
            budget.nodes = nodes
            if time.monotonic() > t_end:
                return "timeout", None
            if node_cap is not None and nodes >= node_cap:
                return "budget", None
            check_at = nodes + 2048
        assign[p] = v
        used |= low
        ent[2] = v
        front.discard(p)
        for q, _ in adj[p]:
            if assign[q] < 0:
                front.add(q)
        ok = True
        for q, _ in adj[p]:
            if assign[q] < 0 and not cand(q):
                ok = False
                break
        if not ok:
            continue
        if len(stack) == remaining:
            budget.nodes = nodes
            return "found", tuple(assign)
        np_, nc = select()
        stack.append([np_, nc, -1])

    budget.nodes = nodes
    return "none", None


def _dp_spanning(host: Digraph, orientation, is_cycle: bool, pins: dict[int, int],
                 allowed: int, budget: _Budget) -> tuple[str, tuple[int, ...] | None]:
    """Layered subset DP; complete for spanning patterns, aborts on a state
    budget so dense instances fall back to plain search."""
    out_adj = host.out_adj
    in_adj = host.in_adj
    size = len(orientation) + (0 if is_cycle else 1)
    pin_mask = [pins.get(d) for d in range(size)]

    starts = [pins[0]] if 0 in pins else bit_list(allowed)
    total_states = 0

    for v0 in starts:
        if time.monotonic() > budget.t_end:
            return "timeout", None
        layers: list[dict[int, int]] = [{1 << v0: 1 << v0}]
        dead = False
        for d in range(size - 1):
            fwd = orientation[d]
            want = pin_mask[d + 1]
            cur = layers[d]
            nxt: dict[int, int] = {}
            for mask, lasts in cur.items():
                avail = allowed & ~mask
                if want is not None:
                    avail &= 1 << want
                    if not avail:
                        continue
                ml = lasts
                while ml:
                    lb = ml & -ml
                    ml ^= lb
                    u = lb.bit_length() - 1
                    step = (out_adj[u] if fwd else in_adj[u]) & avail
                    while step:
                        vb = step & -step
                        step ^= vb
                        key = mask | vb
                        nxt[key] = nxt.get(key, 0) | vb
            total_states += len(nxt)
            if total_states > DP_STATE_BUDGET:
                return "budget", None
            if not nxt:
                dead = True
                break
            layers.append(nxt)
        if dead:
            continue
        final = layers[size - 1].get(allowed, 0)
        if is_cycle:
            closing = in_adj[v0] if orientation[size - 1] else out_adj[v0]
            final &= closing
        if not final:
            continue
        # reconstruct backwards, lowest vertex first at each step
        mapping = [0] * size
        mask = allowed
        vb = final & -final
        for d in range(size - 1, 0, -1):
            v = vb.bit_length() - 1
            mapping[d] = v
            pmask = mask ^ vb
            lasts = layers[d - 1][pmask]
            preds = lasts & (in_adj[v] if orientation[d - 1] else out_adj[v])
            vb = preds & -preds
            mask = pmask
        mapping[0] = vb.bit_length() - 1
        return "found", tuple(mapping)
    return "none", None


def _orientation_of(pattern) -> tuple[tuple[bool, ...], bool]:
    if isinstance(pattern, CyclePattern):
        return pattern.orientation, True
    return pattern.orientation, False


def _engine(host: Digraph, pattern, pins: dict[int, int], allowed: int,
            budget: _Budget, node_budget: int | None) -> tuple[str, tuple[int, ...] | None, str]:
    adj = _pattern_adjacency(pattern)
    filt = _static_filter(host, adj, allowed)
    for p, v in pins.items():
        filt[p] &= 1 << v
    size = len(adj)
    spanning = size == allowed.bit_count()
    orientation, is_cycle = _orientation_of(pattern)

    stage = _Budget(budget.t_end, budget.nodes + BT_STAGE_NODES)
    stage.nodes = budget.nodes
    status, mapping = _backtrack(host, adj, filt, pins, allowed, stage)
    budget.nodes = stage.nodes
    if status in ("found", "none", "timeout"):
        return status, mapping, "backtrack"

    if spanning and size <= DP_CAP:
        status, mapping = _dp_spanning(host, orientation, is_cycle, pins, allowed, budget)
        if status in ("found", "none", "timeout"):
            return status, mapping, "dp"

    stage = _Budget(budget.t_end, node_budget)
    stage.nodes = budget.nodes
    status, mapping = _backtrack(host, adj, filt, pins, allowed, stage)
    budget.nodes = stage.nodes
    if status == "budget":
        status = "timeout"
    return status, mapping, "backtrack"


def exact_embed(host: Digraph, pattern, pins: dict[int, int] | None = None,
                allowed: int | None = None, deadline: float = 10.0,
                node_budget: int | None = None) -> EmbedResult:
    """Search for an orientation-respecting injective embedding.

    pins maps pattern positions to required host vertices; allowed
    restricts usable host vertices (default all). Within the deadline the
    answer is definitive; "timeout" is an explicit outcome, not a guess.
    """
    t0 = time.monotonic()
    pins = dict(pins or {})
    if allowed is None:
        allowed = host.vertex_mask
    size = pattern_size(pattern)

    for p, v in pins.items():
        if not 0 <= p < size:
            raise InputError(f"pin position {p} outside pattern")
        if not 0 <= v < host.n or not allowed >> v & 1:
            raise InputError(f"pin vertex {v} unusable")
    if len(set(pins.values())) != len(pins):
        raise InputError("pins collide on a host vertex")
    pool = allowed.bit_count()
    if size == pool and size > SPANNING_CAP:
        raise CapabilityError(f"spanning search capped at {SPANNING_CAP} vertices, got {size}")
    if size > pool:
        return EmbedResult("none", None, 0, time.monotonic() - t0, "size")
    # pinned pattern edges must already exist
    for a, b in pattern_edges(pattern):
        if a in pins and b in pins and not host.has_edge(pins[a], pins[b]):
            return EmbedResult("none", None, 0, time.monotonic() - t0, "pins")
    if size == 1:
        v = pins.get(0, None)
        if v is None:
            if not allowed:
                return EmbedResult("none", None, 0, time.monotonic() - t0, "size")
            v = (allowed & -allowed).bit_length() - 1
        return EmbedResult("found", (v,), 0, time.monotonic() - t0, "trivial")

    t_end = t0 + deadline if deadline is not None else float("inf")
    budget = _Budget(t_end, None)

    is_cycle = isinstance(pattern, CyclePattern)
    if is_cycle and pattern.is_directed():
        # a directed cycle lives inside one strongly connected component
        sub, verts = _restrict(host, allowed)
        comps = strongly_connected_components(sub)
        status_overall = "none"
        method = "scc"
        for comp in comps:
            comp_mask = 0
            for i in bits_of(comp):
                comp_mask |= 1 << verts[i]
            if comp_mask.bit_count() < size:
                continue
            if any(not comp_mask >> v & 1 for v in pins.values()):
                continue
            status, mapping, m = _engine(host, pattern, pins, comp_mask, budget, node_budget)
            if status == "found":
                return EmbedResult("found", mapping, budget.nodes, time.monotonic() - t0, "scc+" + m)
            if status == "timeout":
                status_overall = "timeout"
                break
        return EmbedResult(status_overall, None, budget.nodes, time.monotonic() - t0, method)

    status, mapping, method = _engine(host, pattern, pins, allowed, budget, node_budget)
    return EmbedResult(status, mapping, budget.nodes, time.monotonic() - t0, method)


def _restrict(host: Digraph, allowed: int) -> tuple[Digraph, list[int]]:
    from .digraph import induced

    return induced(host, allowed)


def embed_path_between(host: Digraph, pattern: PathPattern, u: int, v: int,
                       forbidden: int = 0, deadline: float = 10.0,
                       node_budget: int | None = None) -> EmbedResult:
    """Embed an oriented path with both endpoint images fixed.

    u takes position 0 and v the final position; forbidden vertices are
    excluded (the endpoints must not be forbidden)."""
    if pattern.length < 2:
        raise InputError("endpoint-pinned paths need at least 2 vertices")
    allowed = host.vertex_mask & ~forbidden
    for w in (u, v):
        if not 0 <= w < host.n or not allowed >> w & 1:
            raise InputError(f"endpoint {w} unusable")
    if u == v:
        raise InputError("endpoints must differ")
    return exact_embed(host, pattern, pins={0: u, pattern.length - 1: v},
                       allowed=allowed, deadline=deadline, node_budget=node_budget)
