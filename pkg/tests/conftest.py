"""Shared helpers: tiny graphs and brute-force references.

The brute-force embedders here are the court of last resort: pure
itertools sweeps with no pruning, used to cross-check the real search
engines on instances small enough to enumerate completely.
"""

import math
from itertools import permutations

import pytest

from hamorient import Digraph, gen_blowup_tt


def digraph(n, *edges):
    return Digraph.from_edge_list(n, list(edges))


def cycle_digraph(n):
    """Directed cycle 0 -> 1 -> ... -> n-1 -> 0."""
    return digraph(n, *[(i, (i + 1) % n) for i in range(n)])


def complete_digraph(n):
    return digraph(n, *[(u, v) for u in range(n) for v in range(n) if u != v])


def brute_cycle_embed(g, c):
    """Reference spanning-cycle embedder: try every vertex permutation."""
    n = g.n
    assert c.n == n
    for perm in permutations(range(n)):
        ok = True
        for i in range(n):
            a, b = perm[i], perm[(i + 1) % n]
            u, v = (a, b) if c.orientation[i] else (b, a)
            if not g.has_edge(u, v):
                ok = False
                break
        if ok:
            return perm
    return None


def brute_path_embed(g, p, pool=None):
    """Reference path embedder: every injection of positions into pool."""
    verts = pool if pool is not None else range(g.n)
    size = p.length
    for perm in permutations(verts, size):
        ok = True
        for i in range(size - 1):
            a, b = perm[i], perm[i + 1]
            u, v = (a, b) if p.orientation[i] else (b, a)
            if not g.has_edge(u, v):
                ok = False
                break
        if ok:
            return perm
    return None


def brute_robust_outnbhd(g, s_mask, nu):
    """Reference robust out-neighborhood: vertices with >= ceil(nu*n)
    in-edges from the set, counted the slow way."""
    thr = max(1, math.ceil(nu * g.n - 1e-9))
    out = 0
    for v in range(g.n):
        cnt = sum(1 for u in range(g.n) if (s_mask >> u & 1) and g.has_edge(u, v))
        if cnt >= thr:
            out |= 1 << v
    return out


@pytest.fixture
def planted_two_block():
    """Two complete blocks of 6, all cross edges backward, no noise."""
    return gen_blowup_tt([6, 6], intra=1.0, forward_noise=0.0, seed=0)
