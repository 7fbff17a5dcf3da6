import pytest

from hamorient import (CyclePattern, InputError, PathPattern,
                       canonical_rotation, classify_case,
                       directed_run_decomposition_case1b,
                       distinct_path_patterns, has_directed_window,
                       longest_directed_segment, necklace_classes,
                       partition_case2, switch_count, switches)
from hamorient.patterns import reflect, rotate


def test_parse_and_print():
    c = CyclePattern.from_string("++-")
    assert c.orientation == (True, True, False)
    assert c.to_string() == "++-"
    assert c.n == 3
    p = PathPattern.from_string("+-")
    assert p.length == 3


def test_parse_rejects_junk():
    with pytest.raises(InputError):
        CyclePattern.from_string("+*-")
    with pytest.raises(InputError):
        CyclePattern.from_string("directed")  # alias needs a length
    with pytest.raises(InputError):
        CyclePattern.from_string("++", n=5)


def test_aliases():
    assert CyclePattern.from_string("directed", n=4).is_directed()
    anti = CyclePattern.from_string("antidirected", n=6)
    assert anti.is_antidirected()
    with pytest.raises(InputError):
        CyclePattern.antidirected(5)  # odd length cannot alternate


def test_edge_orientation_convention():
    # edge i joins positions i and i+1 mod n; '+' points forward
    c = CyclePattern.from_string("+-+")
    assert c.edge(0) == (0, 1)
    assert c.edge(1) == (2, 1)
    assert c.edge(2) == (2, 0)


def test_switches_interleave():
    c = CyclePattern.from_string("++--")
    sources, sinks = switches(c)
    # position 0: edge (3,0) backward=0->3? o[3]=False means 0->3; o[0]=True means 0->1
    assert sources == [0]
    assert sinks == [2]
    assert switch_count(c) == 2


def test_switch_count_even_exhaustive_small():
    for n in (3, 4, 5, 6):
        for bits in range(1 << n):
            c = CyclePattern(tuple(bool(bits >> i & 1) for i in range(n)))
            assert switch_count(c) % 2 == 0


def test_switch_count_antidirected_is_n():
    c = CyclePattern.antidirected(8)
    assert switch_count(c) == 8


def test_rotate_and_reflect_preserve_switches():
    c = CyclePattern.from_string("++-+--+-")
    for r in range(c.n):
        assert switch_count(rotate(c, r)) == switch_count(c)
    assert switch_count(reflect(c)) == switch_count(c)


def test_reflect_is_involution():
    c = CyclePattern.from_string("++-+--+-")
    assert reflect(reflect(c)) == c


def test_rotate_composition():
    c = CyclePattern.from_string("++-+--+-")
    assert rotate(rotate(c, 3), 5) == c  # 3 + 5 = 8 = n


def test_canonical_rotation_minimal():
    c = CyclePattern.from_string("-++-")
    canon, r = canonical_rotation(c)
    assert canon == rotate(c, r)
    assert canon.to_string() == "++--"
    # canonical form is a fixed point
    assert canonical_rotation(canon)[0] == canon


def test_canonical_rotation_source_at_zero():
    # any pattern with a switch canonicalizes to a source at position 0
    c = CyclePattern.from_string("-+-++-")
    canon, _ = canonical_rotation(c)
    sources, _ = switches(canon)
    assert 0 in sources


def test_necklace_classes_counts():
    # rotation classes of binary strings: standard necklace counts
    assert len(necklace_classes(3)) == 4
    assert len(necklace_classes(4)) == 6
    assert len(necklace_classes(5)) == 8
    assert len(necklace_classes(6)) == 14


def test_necklace_classes_cover_all_rotations():
    reps = necklace_classes(5)
    seen = set()
    for c in reps:
        for r in range(5):
            seen.add(rotate(c, r).orientation)
    assert len(seen) == 32


def test_distinct_path_patterns_counts():
    # strings of length L-1 up to end-to-end reversal (which also flips
    # every sign); L-1 odd has no fixed strings, L-1 even has 2^((L-1)/2)
    assert len(distinct_path_patterns(2)) == 1
    assert len(distinct_path_patterns(3)) == 3
    assert len(distinct_path_patterns(4)) == 4
    assert len(distinct_path_patterns(5)) == 10


def test_distinct_path_patterns_reversal_closure():
    reps = distinct_path_patterns(5)
    seen = set()
    for p in reps:
        seen.add(p.orientation)
        seen.add(p.reversed().orientation)
    assert len(seen) == 16


def test_longest_directed_segment_basic():
    c = CyclePattern.from_string("-+++--+-")
    vlen, start, fw = longest_directed_segment(c)
    assert (vlen, start, fw) == (4, 1, True)


def test_longest_directed_segment_wraps():
    # run of forward edges crossing the string boundary: edges 6,7,0,1
    c = CyclePattern.from_string("++--+-++")
    vlen, start, fw = longest_directed_segment(c)
    assert (vlen, fw) == (5, True)
    assert start == 6


def test_longest_directed_segment_directed_cycle():
    c = CyclePattern.directed(9)
    assert longest_directed_segment(c) == (9, 0, True)


# frozen oracle value: the longest run of "TTTFFTTTT" (edges 5..8 then 0..2
# wrap into one forward run of 7 edges = 8 vertices)
def test_longest_directed_segment_frozen_value():
    c = CyclePattern(tuple(ch == "T" for ch in "TTTFFTTTT"))
    vlen, start, fw = longest_directed_segment(c)
    assert (vlen, start, fw) == (8, 5, True)


def test_longest_matches_window_scan_exhaustive():
    for n in (4, 5, 6, 7):
        for bits in range(1, (1 << n) - 1):
            c = CyclePattern(tuple(bool(bits >> i & 1) for i in range(n)))
            vlen, start, fw = longest_directed_segment(c)
            assert has_directed_window(c, vlen)
            assert not has_directed_window(c, vlen + 1)
            # the reported run really is directed
            o = c.orientation
            assert all(o[(start + i) % n] == fw for i in range(vlen - 1))


def test_classify_case_dichotomy():
    c = CyclePattern.from_string("++++++----------")  # n=16, backward run of 11
    case, ell = classify_case(c, 0.25)      # bar = 4
    assert case == "case1" and ell == 11
    anti = CyclePattern.antidirected(16)
    case, ell = classify_case(anti, 0.25)
    assert case == "case2" and ell == 2


def test_partition_case2_boundaries():
    # alternating pattern, two classes of 12 on n=24, bar = 3
    c = CyclePattern.antidirected(24)
    plan = partition_case2(c, [12, 12], beta=0.125)
    assert plan.t == 2
    assert plan.boundaries[-1] == 24
    assert len(plan.overshoots) == 1
    assert all(0 <= d <= 3 for d in plan.overshoots)
    # segments partition the positions: segment(s) is (start, length)
    assert plan.segment(0)[0] == 0
    for s in range(1, plan.t):
        prev_start, prev_len = plan.segment(s - 1)
        assert plan.segment(s)[0] == prev_start + prev_len
    assert sum(plan.segment(s)[1] for s in range(plan.t)) == 24
    # position 0 is a source: wrap edge leaves backward, edge 0 forward
    assert not c.orientation[-1] and c.orientation[0]
    # each boundary cut sits at a forward edge end (o[cut-1] is True)
    for s in range(plan.t - 1):
        assert c.orientation[plan.boundaries[s] - 1]


def test_partition_case2_source_start_required():
    # rotate the alternating pattern so position 0 is a sink
    c = rotate(CyclePattern.antidirected(24), 1)
    with pytest.raises(Exception):
        partition_case2(c, [12, 12], beta=0.125)


def test_directed_run_decomposition_blocks():
    # n=12, longest run = edges 0..5 forward (7 vertices at positions 0..6);
    # the trailing "--" prevents a wrap extension
    c = CyclePattern.from_string("++++++-+-+--")
    plan = directed_run_decomposition_case1b(c, 3)
    assert plan.ell == 7
    # blocks tile the complement [7, 12)
    assert sum(plan.block_sizes) == 12 - plan.ell
    assert all(2 <= b <= 3 for b in plan.block_sizes)
    assert plan.starts[0] == plan.ell
    for i in range(1, len(plan.starts)):
        assert plan.starts[i] == plan.starts[i - 1] + plan.block_sizes[i - 1]
    # one aux edge per inter-block boundary, orientation copied from the cycle
    assert plan.aux_path.length == len(plan.block_sizes)
    for i in range(len(plan.block_sizes) - 1):
        assert plan.aux_path.orientation[i] == c.orientation[plan.starts[i + 1] - 1]


def test_directed_run_decomposition_rejects_unframed():
    c = CyclePattern.from_string("-+++++-+-+-+")  # run starts at position 1
    with pytest.raises(Exception):
        directed_run_decomposition_case1b(c, 3)
