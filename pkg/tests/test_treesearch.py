import itertools
import random
import time

import pytest

from graphcsg import (BudgetExceededError, brute_force_best, build_pseudotree,
                      dype, make_graph, make_supersub_game, make_tsp_bound,
                      partition_value, random_table_game, structure_masks,
                      tsp, tsp_star_step)

from conftest import FOUR_CYCLE_EDGES, canon, random_connected_edges


def test_tsp_matches_oracle_without_bound():
    rng = random.Random(80)
    for _ in range(25):
        n = rng.randint(1, 7)
        g = make_graph(n, random_connected_edges(rng, n))
        gm = random_table_game(n, seed=rng.randrange(10 ** 6))
        pt = build_pseudotree(g, rng.randrange(n))
        res = tsp(gm, g, pt)
        assert res.best_value == brute_force_best(gm, g).best_value
        assert partition_value(gm, res.best) == res.best_value
        assert all(g.is_connected(b) for b in res.best)


def test_tsp_with_bound_stays_exact():
    rng = random.Random(81)
    for _ in range(25):
        n = rng.randint(1, 7)
        g = make_graph(n, random_connected_edges(rng, n))
        gm = random_table_game(n, seed=rng.randrange(10 ** 6))
        pt = build_pseudotree(g, 0)
        plain = tsp(gm, g, pt)
        bounded = tsp(gm, g, pt, bound=make_tsp_bound(gm, "supersub"))
        assert bounded.best_value == plain.best_value
        assert bounded.stats.nodes_expanded <= plain.stats.nodes_expanded


def test_bound_prunes_on_cooperative_games():
    # strongly merge-rewarding games make the grand coalition optimal and
    # give the bound real teeth
    g = make_graph(7, [(i, i + 1) for i in range(6)])
    gm = make_supersub_game(7, weights=(5,) * 7, kappa=1)
    pt = build_pseudotree(g, 0)
    plain = tsp(gm, g, pt)
    bounded = tsp(gm, g, pt, bound=make_tsp_bound(gm, "supersub"))
    assert bounded.best_value == plain.best_value
    assert bounded.stats.nodes_pruned > 0


def visited_structures(gm, g, pt):
    seen = []
    tsp(gm, g, pt, structure_hook=lambda s: seen.append(canon(s)))
    return seen


def test_search_tree_visits_each_structure_once():
    rng = random.Random(82)
    for _ in range(20):
        n = rng.randint(1, 6)
        g = make_graph(n, random_connected_edges(rng, n))
        gm = random_table_game(n, seed=rng.randrange(10 ** 6))
        pt = build_pseudotree(g, rng.randrange(n))
        seen = visited_structures(gm, g, pt)
        assert len(seen) == len(set(seen)), (n, g.edges, pt.root)
        # the two seeded structures complete the count
        inits = {canon([g.full_mask]), canon([1 << a for a in range(n)])}
        everything = {canon(s) for s in structure_masks(g)}
        assert set(seen) | inits == everything


def test_coverage_counts_on_pinned_graphs():
    g = make_graph(4, FOUR_CYCLE_EDGES)
    pt = build_pseudotree(g, 0)
    gm = random_table_game(4, seed=7)
    seen = set(visited_structures(gm, g, pt))
    inits = {canon([g.full_mask]), canon([1, 2, 4, 8])}
    assert len(seen | inits) == 12
    k4 = make_graph(4, itertools.combinations(range(4), 2))
    seen4 = set(visited_structures(gm, k4, build_pseudotree(k4, 0)))
    assert len(seen4 | inits) == 15


def test_tsp_star_step_completes_optimally():
    rng = random.Random(83)
    for _ in range(20):
        n = rng.randint(2, 7)
        g = make_graph(n, random_connected_edges(rng, n))
        gm = random_table_game(n, seed=rng.randrange(10 ** 6))
        pt = build_pseudotree(g, 0)
        table = dype(gm, g, pt).table
        # grow a partial partition the way the search does: each block is
        # anchored at the first agent the partition does not cover yet
        blocks = []
        covered = 0
        for _ in range(rng.randint(1, 3)):
            free = g.full_mask & ~covered
            if not free:
                break
            anchor = next(1 << a for a in pt.order if not covered >> a & 1)
            b = rng.choice(list(g.connected_subsets(free, required=anchor)))
            blocks.append(b)
            covered |= b
        rem = g.full_mask & ~covered
        if rem == 0:
            continue
        got = tsp_star_step(table, gm, g, blocks, float("-inf"))
        assert got is not None
        done_blocks, total = got
        want = partition_value(gm, blocks) + max(
            partition_value(gm, s) for s in structure_masks(g, ground=rem))
        assert total == want
        assert partition_value(gm, done_blocks) == total
        cov = 0
        for b in done_blocks:
            assert g.is_connected(b) and cov & b == 0
            cov |= b
        assert cov == g.full_mask
        # a completion that cannot beat the incumbent is withheld
        assert tsp_star_step(table, gm, g, blocks, total) is None


def test_tsp_deadline():
    g = make_graph(11, [(i, j) for i in range(11) for j in range(i + 1, 11)])
    gm = random_table_game(11, seed=2)
    pt = build_pseudotree(g, 0)
    with pytest.raises(BudgetExceededError):
        tsp(gm, g, pt, deadline=time.monotonic() - 1)
