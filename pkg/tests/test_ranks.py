import random

import pytest

from zipzip.ranks import (KeyedRng, RankPair, RankPolicy, UnresolvedTie, dominates,
                          gen_geometric, gen_uniform_rank, make_rank)


def test_geometric_mean_matches_failures_before_success():
    rng = random.Random(1)
    for p in (0.5, 0.2):
        draws = [gen_geometric(rng, p) for _ in range(40000)]
        assert sum(draws) / len(draws) == pytest.approx((1 - p) / p, rel=0.05)
        assert min(draws) == 0


@pytest.mark.parametrize("p", [0, 1, -0.1, 1.5])
def test_geometric_rejects_bad_p(p):
    with pytest.raises(ValueError):
        gen_geometric(random.Random(0), p)


def test_uniform_rank_bounds():
    rng = random.Random(2)
    vals = {gen_uniform_rank(rng, 3, 6) for _ in range(500)}
    assert vals == {3, 4, 5, 6}
    with pytest.raises(ValueError):
        gen_uniform_rank(rng, 5, 4)


def test_dominance_order():
    assert dominates((RankPair(2), 9), (RankPair(1), 0))
    assert dominates((RankPair(1), 3), (RankPair(1), 4))
    assert not dominates((RankPair(1), 4), (RankPair(1), 3))
    assert dominates((RankPair(1, 7), 9), (RankPair(1, 6), 0))
    assert dominates((RankPair(1, 7), 0), (RankPair(1, 7), 1))
    assert not dominates((RankPair(0, 99), 0), (RankPair(1, 1), 1))


def test_bit_string_ranks():
    assert dominates((RankPair(0, "1"), 5), (RankPair(0, "01"), 1))
    with pytest.raises(UnresolvedTie):
        dominates((RankPair(0, "01"), 5), (RankPair(0, "011"), 1))
    with pytest.raises(UnresolvedTie):
        dominates((RankPair(0, ""), 5), (RankPair(0, ""), 1))
    with pytest.raises(TypeError):
        dominates((RankPair(0, "1"), 5), (RankPair(0, 1), 1))
    with pytest.raises(TypeError):
        dominates((RankPair(0, None), 5), (RankPair(0, 1), 1))


def test_policy_ranges_and_validation():
    pol = RankPolicy("zipzip", n_cap=2 ** 16, c=3)
    assert pol.r2_range == 16 ** 3
    assert RankPolicy("uniform", n_cap=2 ** 16, c=3).uniform_range == 2 ** 48
    assert not RankPolicy("uniform").geometric
    for bad in (dict(variant="nope"), dict(variant="zipzip", p=0),
                dict(variant="biased")):
        with pytest.raises(ValueError):
            RankPolicy(**bad)


def test_rank_pair_text():
    assert str(RankPair(3)) == "(3,-)"
    assert str(RankPair(3, 12)) == "(3,12)"


def test_keyed_ranks_repeat_and_fresh_ranks_do_not():
    pol = RankPolicy("zipzip")
    keyed = KeyedRng(7)
    assert make_rank(pol, 42, keyed) == make_rank(pol, 42, keyed)
    other = KeyedRng(8)
    assert any(make_rank(pol, k, other) != make_rank(pol, k, keyed) for k in range(20))
    fresh = KeyedRng(7, "fresh")
    draws = {make_rank(pol, 42, fresh) for _ in range(50)}
    assert len(draws) > 1
    with pytest.raises(ValueError):
        KeyedRng(0, "bogus")


def test_variant_shapes():
    rng = KeyedRng(3)
    n_cap = 1024
    assert make_rank(RankPolicy("original"), 1, rng).r2 is None
    u = make_rank(RankPolicy("uniform", n_cap=n_cap), 1, rng)
    assert u.r2 is None and 1 <= u.r1 <= n_cap ** 3
    z = make_rank(RankPolicy("zipzip", n_cap=n_cap), 1, rng)
    assert 1 <= z.r2 <= 1000


def test_biased_rank_floor_log_weight():
    pol = RankPolicy("biased", weight_fn=lambda k: k)
    rng = KeyedRng(5)
    for w in (1, 2, 3, 1000, 2 ** 40):
        assert make_rank(pol, w, rng).r1 >= w.bit_length() - 1
    low = [make_rank(pol, 1, KeyedRng(s)).r1 for s in range(2000)]
    assert sum(low) / len(low) == pytest.approx(1.0, abs=0.1)
    bad = RankPolicy("biased", weight_fn=lambda k: 0)
    with pytest.raises(ValueError):
        make_rank(bad, 1, rng)


def test_variable_p_small_p_gives_tall_ranks():
    pol = RankPolicy("variable_p", p=0.01)
    draws = [make_rank(pol, k, KeyedRng(1)).r1 for k in range(2000)]
    assert sum(draws) / len(draws) == pytest.approx(99, rel=0.15)


def test_geometric_frequencies_and_mean():
    rng = random.Random(11)
    n = 10 ** 6
    counts = {}
    total = 0
    for _ in range(n):
        k = gen_geometric(rng)
        counts[k] = counts.get(k, 0) + 1
        total += k
    assert total / n == pytest.approx(1.0, abs=0.01)
    for k in range(6):
        assert counts[k] / n == pytest.approx(2.0 ** -(k + 1), abs=0.003)


def test_uniform_two_values_balanced():
    rng = random.Random(12)
    n = 10 ** 6
    ones = sum(gen_uniform_rank(rng, 1, 2) == 1 for _ in range(n))
    assert ones / n == pytest.approx(0.5, abs=0.002)


def test_dominance_is_a_strict_total_order():
    items = [(RankPair(a, b), k) for a in range(4) for b in range(4) for k in range(4)]
    for x in items:
        assert not dominates(x, x)
        for y in items:
            if x[1] != y[1] or x[0] != y[0]:
                if x[1] == y[1]:
                    continue  # one key carries one rank
                assert dominates(x, y) != dominates(y, x)
