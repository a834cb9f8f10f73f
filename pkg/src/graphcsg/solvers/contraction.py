"""Search over coalition structures by contracting graph edges.

Every search state is itself a coalition structure: the current blocks
plus, between adjacent blocks, an edge that is either solid (may still be
contracted) or dashed (permanently forbidden). The children of a state
contract its solid edges one by one, and the i-th child first marks the
preceding i-1 edges dashed, which makes the traversal visit every feasible
structure exactly once starting from the all-singletons root.

Dashed bookkeeping lives on the original graph edges: a block-pair edge is
dashed as soon as any original edge crossing the pair is dashed, which is
exactly the merge rule for contracted parallel edges.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..games import Game, Partition
from ..graph import Graph
from .base import (BudgetExceededError, SearchStats, SolverResult,
                   require_connected)

_DEADLINE_STRIDE = 512


@dataclass(frozen=True)
class ContractedState:
    """Blocks of the structure plus the dashed set over original edge
    indices. Blocks are kept sorted by lowest agent."""

    blocks: tuple[int, ...]
    dashed: int

    def partition(self) -> Partition:
        return Partition(self.blocks)


def initial_state(g: Graph) -> ContractedState:
    return ContractedState(tuple(1 << a for a in range(g.n)), 0)


def _solid_pairs(g: Graph, blocks, dashed: int):
    """Solid block-pair edges as (i, j, crossing_edges_mask), ordered by
    block ids, which equal tuple positions because blocks stay sorted."""
    block_of = {}
    for idx, b in enumerate(blocks):
        m = b
        while m:
            bit = m & -m
            m ^= bit
            block_of[bit.bit_length() - 1] = idx
    crossing: dict[tuple[int, int], int] = {}
    for k, (u, w) in enumerate(g.edges):
        bu = block_of[u]
        bw = block_of[w]
        if bu != bw:
            key = (bu, bw) if bu < bw else (bw, bu)
            crossing[key] = crossing.get(key, 0) | (1 << k)
    return [(i, j, cross) for (i, j), cross in sorted(crossing.items())
            if not cross & dashed]


def _merge_blocks(blocks, i: int, j: int):
    # i < j, so the union keeps block i's lowest agent and the tuple order.
    return blocks[:i] + (blocks[i] | blocks[j],) + blocks[i + 1:j] \
        + blocks[j + 1:]


def state_children(g: Graph, state: ContractedState):
    """Children of a state in deterministic order, marks applied."""
    acc = state.dashed
    for i, j, cross in _solid_pairs(g, state.blocks, state.dashed):
        yield ContractedState(_merge_blocks(state.blocks, i, j), acc)
        acc |= cross


def merged_partition(g: Graph, state: ContractedState) -> Partition:
    """Coarsening that merges every group of blocks connected through
    solid edges. Every structure in the state's subtree refines it."""
    pairs = _solid_pairs(g, state.blocks, state.dashed)
    return Partition(_merge_all(state.blocks, pairs))


def cfss(game: Game, g: Graph, bound=None, *, deadline: float | None = None,
         structure_hook=None) -> SolverResult:
    """Exact contraction search; with a bound hook it prunes subtrees whose
    optimistic value cannot beat the incumbent.

    `bound`, when given, maps (blocks, merged_blocks) to an upper bound on
    every structure in the subtree, merged_blocks being the coarsest
    reachable coarsening.
    """
    require_connected(g)
    n = g.n
    v = game.value
    tol = game.tolerance
    stats = SearchStats()

    best_blocks = [1 << a for a in range(n)]
    best_val = sum(v(b) for b in best_blocks)
    root_val = best_val

    def visit(blocks, value, dashed):
        nonlocal best_blocks, best_val
        stats.structures_visited += 1
        stats.nodes_expanded += 1
        if deadline is not None \
                and stats.nodes_expanded % _DEADLINE_STRIDE == 0 \
                and time.monotonic() >= deadline:
            raise BudgetExceededError("deadline hit during contraction search")
        if structure_hook is not None:
            structure_hook(tuple(blocks))
        if value > best_val + tol:
            best_val = value
            best_blocks = list(blocks)
        pairs = _solid_pairs(g, blocks, dashed)
        if not pairs:
            return
        if bound is not None:
            merged = _merge_all(blocks, pairs)
            if not best_val < bound(blocks, merged):
                stats.nodes_pruned += 1
                return
        acc = dashed
        for i, j, cross in pairs:
            nb = _merge_blocks(blocks, i, j)
            nv = value - v(blocks[i]) - v(blocks[j]) + v(nb[i])
            visit(nb, nv, acc)
            acc |= cross

    visit(tuple(1 << a for a in range(n)), root_val, 0)
    return SolverResult(best=Partition(best_blocks), best_value=best_val,
                        stats=stats)


def _merge_all(blocks, pairs):
    """Union-find over block indices along solid pairs."""
    parent = list(range(len(blocks)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri
    groups: dict[int, int] = {}
    for idx, b in enumerate(blocks):
        r = find(idx)
        groups[r] = groups.get(r, 0) | b
    return tuple(groups[r] for r in sorted(groups))
