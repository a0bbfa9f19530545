import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from zipzip.ranks import KeyedRng, RankPair, RankPolicy
from zipzip.ziptree import ZipTree, build_canonical, check_skiplist_isomorphism

GOLDEN = """(2,2,-)
  L:(1,0,-)
  R:(4,2,-)
    L:(3,1,-)
    R:(5,0,-)"""

GOLDEN_PAIRS = [(1, RankPair(0)), (2, RankPair(2)), (3, RankPair(1)),
                (4, RankPair(2)), (5, RankPair(0))]

ops = st.lists(st.tuples(st.booleans(), st.integers(0, 40)), max_size=120)
rank_lists = st.lists(st.integers(0, 3), min_size=0, max_size=14)


def test_golden_shape_from_definition_and_from_inserts():
    assert build_canonical(GOLDEN_PAIRS).dumps() == GOLDEN
    for order in itertools.permutations(range(5)):
        t = ZipTree()
        for i in order:
            t.insert(*GOLDEN_PAIRS[i])
        assert t.dumps() == GOLDEN


def test_loads_round_trip():
    t = ZipTree.loads(GOLDEN)
    assert t.dumps() == GOLDEN
    assert len(t) == 5 and not t.validate()
    zz = ZipTree.loads("(3,1,7)\n  R:(9,1,2)")
    assert zz.root.rank == RankPair(1, 7)


def test_empty_and_single():
    t = ZipTree()
    assert t.search(3) == (False, 0)
    assert not t.delete(3)
    assert t.insert(3)
    assert not t.insert(3)
    assert t.search(3) == (True, 1)
    s = t.stats()
    assert (s.smallest_depth, s.largest_depth, s.height) == (1, 1, 1)
    assert t.delete(3) and t.root is None and len(t) == 0


def test_search_depth_counts_nodes():
    t = build_canonical(GOLDEN_PAIRS)
    assert t.search(2) == (True, 1)
    assert t.search(3) == (True, 3)
    assert t.search(6) == (False, 3)


def test_stats_groups_by_r1():
    st_ = build_canonical(GOLDEN_PAIRS).stats()
    assert sorted(st_.rank_group_sizes) == [1, 1, 1, 2]
    assert st_.mean_depth == pytest.approx(11 / 5)
    assert st_.root_r1 == 2


@settings(max_examples=150, deadline=None)
@given(ops, st.integers(0, 2 ** 32), st.sampled_from(["original", "zipzip", "uniform"]))
def test_matches_set_oracle(seq, seed, variant):
    t = ZipTree(RankPolicy(variant, n_cap=64), KeyedRng(seed, "fresh"))
    live = set()
    for add, k in seq:
        if add:
            assert t.insert(k) == (k not in live)
            live.add(k)
        else:
            assert t.delete(k) == (k in live)
            live.discard(k)
        assert not t.validate()
    assert list(t) == sorted(live)
    if variant != "uniform":
        assert t.check_skiplist_isomorphism()


@settings(max_examples=200, deadline=None)
@given(rank_lists, st.randoms(use_true_random=False))
def test_any_insert_order_gives_canonical_tree(r1s, rnd):
    pairs = [(k, RankPair(r)) for k, r in enumerate(r1s)]
    order = list(pairs)
    rnd.shuffle(order)
    t = ZipTree()
    for k, r in order:
        t.insert(k, r)
    assert t.dumps() == build_canonical(pairs).dumps()


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 60), unique=True, max_size=40), st.integers(0, 60),
       st.integers(0, 2 ** 32))
def test_insert_then_delete_restores_tree(keys, extra, seed):
    t = ZipTree(RankPolicy("zipzip", n_cap=64), KeyedRng(seed))
    for k in keys:
        t.insert(k)
    before = t.dumps()
    if extra in keys:
        t.delete(extra)
        t.insert(extra)
    else:
        t.insert(extra)
        t.delete(extra)
    assert t.dumps() == before


def test_history_independence_with_keyed_ranks():
    keys = list(range(200))
    rnd = random.Random(4)
    shapes = set()
    for _ in range(5):
        t = ZipTree(RankPolicy("zipzip", n_cap=256), KeyedRng(11))
        order = keys + list(range(200, 260))
        rnd.shuffle(order)
        for k in order:
            t.insert(k)
        for k in range(200, 260):
            t.delete(k)
        shapes.add(t.dumps())
    assert len(shapes) == 1


def test_canonical_rejects_unsorted_keys():
    with pytest.raises(ValueError):
        build_canonical([(2, RankPair(0)), (1, RankPair(0))])
    with pytest.raises(ValueError):
        build_canonical([(1, RankPair(0)), (1, RankPair(1))])


def test_validate_reports_corruption():
    t = build_canonical(GOLDEN_PAIRS)
    t.root.left, t.root.right = t.root.right, t.root.left
    assert any("BST order" in p for p in t.validate())
    t = build_canonical(GOLDEN_PAIRS)
    t.root.right.left.rank = RankPair(5)
    assert any("heap order" in p for p in t.validate())
    t = build_canonical(GOLDEN_PAIRS)
    t.size = 9
    assert any("size" in p for p in t.validate())


def test_skiplist_isomorphism():
    t = build_canonical(GOLDEN_PAIRS)
    assert check_skiplist_isomorphism(t)
    t.root.right.left.rank = RankPair(5)
    assert not t.check_skiplist_isomorphism()
    with pytest.raises(ValueError):
        ZipTree(RankPolicy("uniform")).check_skiplist_isomorphism()


def test_rank_override_bypasses_policy():
    t = ZipTree(RankPolicy("zipzip"), KeyedRng(0))
    t.insert(5, RankPair(9, 1))
    assert t.root.rank == RankPair(9, 1)


def test_long_paths_need_no_recursion():
    # Equal ranks inserted in decreasing key order form a left path.
    n = 2 ** 17
    t = ZipTree()
    for k in range(n - 1, -1, -1):
        t.insert(k, RankPair(0))
    st_ = t.stats()
    assert st_.height == n and st_.largest_depth == n
    assert not t.validate() and t.check_skiplist_isomorphism()
    # Text form indents by depth, so keep that check to a shorter path.
    short = ZipTree()
    for k in range(2000, 0, -1):
        short.insert(k, RankPair(0))
    assert len(short.dumps().splitlines()) == 2000
    assert t.delete(0) and t.delete(n // 2) and len(t) == n - 2


def test_rank_groups_average_two():
    from zipzip.experiments import rank_groups
    g = rank_groups(2 ** 14, 100, 5)
    assert g.mean_size == pytest.approx(2.0, abs=0.05)
