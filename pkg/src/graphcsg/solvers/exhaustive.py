"""Exhaustive enumeration of feasible structures and the brute-force
oracle built on it. The oracle is the reference every other solver is
checked against, so it stays as plain as possible."""

from __future__ import annotations

import time

from ..games import Game, Partition
from ..graph import Graph
from .base import BudgetExceededError, SearchStats, SolverResult

# Bell(12) is ~4.2M; anything past that is not a desk-scale oracle run.
ORACLE_MAX_N = 12

_DEADLINE_STRIDE = 8192


def structure_masks(g: Graph, ground: int | None = None):
    """Yield every partition of `ground` (default: all agents) into
    connected blocks, as a tuple of masks, each partition exactly once.

    The next block always contains the lowest-index uncovered agent, so the
    tuples come out sorted by lowest agent and disconnected graphs work per
    component without special casing.
    """
    if ground is None:
        ground = g.full_mask
    connected_subsets = g.connected_subsets
    acc = []

    def rec(rest):
        if not rest:
            yield tuple(acc)
            return
        low = rest & -rest
        for c in connected_subsets(rest, required=low):
            acc.append(c)
            yield from rec(rest & ~c)
            acc.pop()

    yield from rec(ground)


def enumerate_feasible_structures(g: Graph):
    """`structure_masks` wrapped into Partition objects."""
    for masks in structure_masks(g):
        yield Partition(masks)


def brute_force_best(game: Game, g: Graph, *, max_n: int = ORACLE_MAX_N,
                     deadline: float | None = None) -> SolverResult:
    """Scan every feasible structure and keep the first-found maximum."""
    if g.n > max_n:
        raise ValueError(
            f"brute force capped at n <= {max_n}, got n = {g.n}")
    v = game.value
    stats = SearchStats()
    best_masks = None
    best_val = 0
    count = 0
    for masks in structure_masks(g):
        count += 1
        if deadline is not None and count % _DEADLINE_STRIDE == 0 \
                and time.monotonic() >= deadline:
            stats.structures_visited = count
            raise BudgetExceededError("deadline hit during exhaustive scan")
        val = 0
        for b in masks:
            val += v(b)
        if best_masks is None or val > best_val:
            best_val = val
            best_masks = masks
    stats.structures_visited = count
    return SolverResult(best=Partition(best_masks), best_value=best_val,
                        stats=stats)
