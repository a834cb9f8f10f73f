"""Depth-first search over coalition structures, seeded stage by stage.

The incumbent starts as the better of the one-block partition and the
all-singletons partition. Stage k then enumerates every candidate block
for the first agent whose first excluded agent (in breadth-first order) is
the stage agent; the search below a seed repeatedly carves a connected
block around the earliest uncovered agent. Each full structure is reached
exactly once across all stages. A bound hook may prune subtrees whose
optimistic value cannot beat the incumbent.
"""

from __future__ import annotations

import time

from ..games import Game, Partition, Value
from ..graph import Graph
from ..pseudotree import Pseudotree
from .base import (BudgetExceededError, SearchStats, SolverResult,
                   require_connected)
from .dptable import DpTable, reconstruct_blocks

_DEADLINE_STRIDE = 4096


def tsp(game: Game, g: Graph, pt: Pseudotree, bound=None, *,
        deadline: float | None = None, structure_hook=None) -> SolverResult:
    """Branch-and-bound tree search; exact for any admissible bound and
    exhaustive with bound=None.

    `bound`, when given, maps (partial_value, remainder_mask) to an upper
    bound on any completion; a subtree is skipped unless its bound strictly
    beats the incumbent. `structure_hook` observes every full structure the
    search visits (used by coverage tests).
    """
    require_connected(g)
    n = g.n
    full = g.full_mask
    v = game.value
    tol = game.tolerance
    order = pt.order
    stats = SearchStats()

    singles_val = sum(v(1 << a) for a in range(n))
    grand_val = v(full)
    if grand_val > singles_val + tol:
        best_blocks = [full]
        best_val = grand_val
    else:
        best_blocks = [1 << a for a in range(n)]
        best_val = singles_val

    connected_subsets = g.connected_subsets

    def search(p_blocks, covered, p_value, pos_hint):
        nonlocal best_blocks, best_val
        i = pos_hint
        while (1 << order[i - 1]) & covered:
            i += 1
        a_bit = 1 << order[i - 1]
        rem = full & ~covered
        for c in connected_subsets(rem, required=a_bit):
            stats.nodes_expanded += 1
            stats.subsets_enumerated += 1
            if deadline is not None \
                    and stats.nodes_expanded % _DEADLINE_STRIDE == 0 \
                    and time.monotonic() >= deadline:
                raise BudgetExceededError("deadline hit during tree search")
            new_cov = covered | c
            new_val = p_value + v(c)
            if new_cov == full:
                stats.structures_visited += 1
                if structure_hook is not None:
                    structure_hook(tuple(p_blocks) + (c,))
                if new_val > best_val + tol:
                    best_val = new_val
                    best_blocks = p_blocks + [c]
            else:
                if bound is not None:
                    ub = bound(new_val, full & ~new_cov)
                    if not best_val < ub:
                        stats.nodes_pruned += 1
                        continue
                p_blocks.append(c)
                search(p_blocks, new_cov, new_val, i + 1)
                p_blocks.pop()

    for stage in range(2, n + 1):
        prefix = pt.prefix_masks[stage]
        excluded = 1 << order[stage - 1]
        for seed in connected_subsets(full ^ excluded, required=prefix):
            stats.subsets_enumerated += 1
            # The first uncovered agent under this seed is the stage agent.
            search([seed], seed, v(seed), stage)

    return SolverResult(best=Partition(best_blocks), best_value=best_val,
                        stats=stats)


def tsp_star_step(table: DpTable, game: Game, g: Graph, partial_blocks,
                  incumbent_value: Value):
    """Finish a partial partition optimally from table entries instead of
    searching its subtree.

    Every connected component of the uncovered remainder must already have
    a table entry; callers check availability (and fall back to ordinary
    search when it fails) before calling. Returns (blocks, value) when the
    completion beats the incumbent, else None.
    """
    v = game.value
    covered = 0
    total = 0
    for b in partial_blocks:
        covered |= b
        total += v(b)
    rem = g.full_mask & ~covered
    comps = g.connected_components(rem)
    for comp in comps:
        total += table.v_star(comp)
    if game.improves(total, incumbent_value):
        blocks = list(partial_blocks) + reconstruct_blocks(table, comps, g)
        return blocks, total
    return None
