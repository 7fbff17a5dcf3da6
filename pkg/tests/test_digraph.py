import pytest

from hamorient import (Digraph, InputError, cross_counts, degree_profile,
                       double_edge_graph, induced, is_strongly_connected,
                       reverse_digraph, strongly_connected_components)
from hamorient.bitset import mask_of

from conftest import complete_digraph, cycle_digraph, digraph


def test_construction_and_degrees():
    g = digraph(4, (0, 1), (1, 0), (1, 2), (2, 3))
    assert g.n == 4
    assert g.edge_count() == 4
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert not g.has_edge(2, 1)
    assert g.out_degree(1) == 2
    assert g.in_degree(0) == 1
    assert g.degree(1) == 3
    assert g.edges() == [(0, 1), (1, 0), (1, 2), (2, 3)]


def test_construction_rejects_bad_input():
    with pytest.raises(InputError):
        digraph(3, (0, 3))
    with pytest.raises(InputError):
        digraph(3, (1, 1))
    with pytest.raises(InputError):
        digraph(3, (0, 1), (0, 1))
    with pytest.raises(InputError):
        Digraph.from_edge_list(5000, [])


def test_degree_profile():
    g = digraph(3, (0, 1), (1, 2), (2, 0), (0, 2))
    prof = degree_profile(g)
    assert prof.out_degrees == (2, 1, 1)
    assert prof.in_degrees == (1, 1, 2)
    assert prof.degrees == (3, 2, 3)
    assert prof.min_total == 2
    assert prof.min_semi == 1


def test_degree_profile_complete():
    g = complete_digraph(5)
    prof = degree_profile(g)
    assert prof.min_total == 8
    assert prof.min_semi == 4


def test_cross_counts():
    # 0,1 on one side; 2,3 on the other; 3 forward edges, 1 backward
    g = digraph(4, (0, 2), (0, 3), (1, 2), (3, 1))
    a, b = mask_of([0, 1]), mask_of([2, 3])
    fwd, bwd, tot = cross_counts(g, a, b)
    assert (fwd, bwd, tot) == (3, 1, 4)
    # reversed roles swap the counts
    assert cross_counts(g, b, a)[:2] == (1, 3)


def test_induced_relabels():
    g = digraph(5, (0, 2), (2, 4), (4, 0), (1, 3))
    sub, verts = induced(g, mask_of([0, 2, 4]))
    assert verts == [0, 2, 4]
    assert sub.n == 3
    assert sub.edges() == [(0, 1), (1, 2), (2, 0)]
    assert is_strongly_connected(sub)


def test_reverse_digraph():
    g = digraph(3, (0, 1), (1, 2))
    r = reverse_digraph(g)
    assert r.has_edge(1, 0) and r.has_edge(2, 1)
    assert r.edge_count() == 2
    assert reverse_digraph(r).edges() == g.edges()


def test_scc_topological_order():
    # two 2-cycles joined by a one-way edge: {0,1} -> {2,3}
    g = digraph(4, (0, 1), (1, 0), (2, 3), (3, 2), (1, 2))
    comps = strongly_connected_components(g)
    assert comps == [mask_of([0, 1]), mask_of([2, 3])]


def test_scc_dag_is_positional_topological():
    # path 2 -> 0 -> 1: every edge goes earlier -> later in the output
    g = digraph(3, (2, 0), (0, 1))
    comps = strongly_connected_components(g)
    assert comps == [1 << 2, 1 << 0, 1 << 1]


def test_scc_cycle_single_component():
    g = cycle_digraph(7)
    assert strongly_connected_components(g) == [g.vertex_mask]
    assert is_strongly_connected(g)


def test_scc_topological_invariant_random():
    import random

    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(2, 12)
        edges = {(rng.randrange(n), rng.randrange(n)) for _ in range(3 * n)}
        g = digraph(n, *[(u, v) for u, v in edges if u != v])
        comps = strongly_connected_components(g)
        # partition of the vertex set
        union = 0
        for m in comps:
            assert m and not (m & union)
            union |= m
        assert union == g.vertex_mask
        # topological: no edge from a later component to an earlier one
        comp_idx = {}
        for i, m in enumerate(comps):
            for v in range(n):
                if m >> v & 1:
                    comp_idx[v] = i
        for u, v in g.edges():
            assert comp_idx[u] <= comp_idx[v]


def test_double_edge_graph():
    g = digraph(3, (0, 1), (1, 0), (1, 2))
    d = double_edge_graph(g)
    assert d.has_edge(0, 1) and d.has_edge(1, 0)
    assert not d.has_edge(1, 2)
    assert d.edge_count() == 2


def test_not_strongly_connected():
    assert not is_strongly_connected(digraph(2, (0, 1)))
    assert is_strongly_connected(digraph(1))
