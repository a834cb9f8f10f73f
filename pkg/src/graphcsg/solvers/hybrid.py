"""Hybrid solver: table-filling sweep and seeded tree search sharing state.

The sweep fills table levels from the back of the breadth-first order and
after each level scans the candidate first-agent blocks that level settles.
The tree search consumes seed stages from the front. Both families are
indexed the same way (by the first agent, in order, excluded from the
first block), so once the sweep's next level drops below the search's
pending stage the two sides have jointly covered every structure and the
shared incumbent is optimal.

Before expanding a node the search consults the table: when the whole
uncovered remainder lies within published levels, the best completion is a
handful of lookups and the subtree is skipped. The needed entries are
expected to exist whenever that trigger fires (remainder components keep
connected complements); a missing entry is logged, counted, and answered
by falling back to plain search for that node.
"""

from __future__ import annotations

import logging
import threading
import time

from ..games import Game, Partition
from ..graph import Graph
from ..pseudotree import Pseudotree
from .base import (BudgetExceededError, InternalInvariantError, SearchStats,
                   SolverResult, deadline_passed, elapsed_us,
                   require_connected)
from .dp import _solve_level
from .dptable import DpTable, reconstruct_blocks
from .treesearch import tsp_star_step

log = logging.getLogger(__name__)

_DEADLINE_STRIDE = 1024


class _Stopped(Exception):
    """Internal: a worker was asked to stop mid-unit."""


class _Control:
    __slots__ = ("stop", "deadline_hit", "error")

    def __init__(self):
        self.stop = False
        self.deadline_hit = False
        self.error = None


class _Incumbent:
    """Best structure so far, shared by both workers.

    `offer` is compare-and-improve under a lock, so a stale competing offer
    loses cleanly. Unlocked reads of `value` are fine everywhere: the value
    only rises, and a stale read merely delays pruning.
    """

    __slots__ = ("value", "blocks", "trace", "_lock", "_t0", "_tol", "_hook")

    def __init__(self, blocks, value, t0, tolerance, hook=None):
        self.blocks = list(blocks)
        self.value = value
        self.trace = [(0, value)]
        self._lock = threading.Lock()
        self._t0 = t0
        self._tol = tolerance
        self._hook = hook

    def offer(self, blocks, value) -> bool:
        with self._lock:
            if not value > self.value + self._tol:
                return False
            self.blocks = list(blocks)
            self.value = value
            t = elapsed_us(self._t0)
            self.trace.append((t, value))
            if self._hook is not None:
                self._hook(t, value, Partition(self.blocks))
        return True

    def snapshot(self):
        with self._lock:
            return list(self.blocks), self.value, list(self.trace)


class _Sweep:
    """Table-filling worker; `next_level` is its frontier."""

    __slots__ = ("game", "g", "pt", "table", "inc", "stats", "deadline",
                 "control", "next_level")

    def __init__(self, game, g, pt, table, inc, stats, deadline, control):
        self.game = game
        self.g = g
        self.pt = pt
        self.table = table
        self.inc = inc
        self.stats = stats
        self.deadline = deadline
        self.control = control
        self.next_level = g.n

    def step(self) -> bool:
        """Fill one level and scan the first blocks it settles."""
        level = self.next_level
        if level < 2:
            return False
        _solve_level(self.game.value, self.g, self.pt, self.table, level,
                     self.stats, self.deadline)
        self._scan(level)
        self.next_level = level - 1
        return True

    def _scan(self, level: int) -> None:
        g = self.g
        game = self.game
        v = game.value
        table = self.table
        inc = self.inc
        full = g.full_mask
        tv = table.values
        component_of = g.component_of
        ground = full ^ (1 << self.pt.order[level - 1])
        seen = 0
        for s in g.connected_subsets(ground,
                                     required=self.pt.prefix_masks[level]):
            seen += 1
            if seen % _DEADLINE_STRIDE == 0:
                if deadline_passed(self.deadline):
                    self.stats.subsets_enumerated += seen
                    raise BudgetExceededError("deadline hit during level scan")
                if self.control.stop:
                    break
            val = v(s)
            rest = full & ~s
            try:
                while rest:
                    comp = component_of(rest)
                    val += tv[comp]
                    rest &= ~comp
            except KeyError as e:
                raise InternalInvariantError(
                    f"missing table entry for mask {e.args[0]}") from None
            if game.improves(val, inc.value):
                comps = g.connected_components(full & ~s)
                inc.offer([s] + reconstruct_blocks(table, comps, g), val)
        self.stats.subsets_enumerated += seen


class _Search:
    """Seeded tree-search worker; `next_stage` is its frontier (the stage
    of the seed currently pending, n+1 once all stages are done)."""

    __slots__ = ("game", "g", "pt", "table", "inc", "stats", "bound",
                 "deadline", "control", "crossed", "next_stage", "_seeds",
                 "_ticks")

    def __init__(self, game, g, pt, table, inc, stats, bound, deadline,
                 control, crossed):
        self.game = game
        self.g = g
        self.pt = pt
        self.table = table
        self.inc = inc
        self.stats = stats
        self.bound = bound
        self.deadline = deadline
        self.control = control
        self.crossed = crossed
        self.next_stage = 2
        self._seeds = None
        self._ticks = 0

    def step(self) -> bool:
        """Search the subtree of one seed; False when out of work or told
        to stop."""
        g = self.g
        n = g.n
        while True:
            if self.next_stage > n or self.control.stop or self.crossed():
                return False
            if self._seeds is None:
                stage = self.next_stage
                self._seeds = g.connected_subsets(
                    g.full_mask ^ (1 << self.pt.order[stage - 1]),
                    required=self.pt.prefix_masks[stage])
            seed = next(self._seeds, None)
            if seed is None:
                self._seeds = None
                self.next_stage += 1
                continue
            self.stats.subsets_enumerated += 1
            try:
                self._expand([seed], seed, self.game.value(seed),
                             self.next_stage)
            except _Stopped:
                return False
            return True

    def _expand(self, blocks, covered, value, pos_hint) -> None:
        g = self.g
        table = self.table
        full = g.full_mask
        order = self.pt.order
        pos = pos_hint
        while (1 << order[pos - 1]) & covered:
            pos += 1
        if pos >= table.published_level:
            comps = g.connected_components(full & ~covered)
            if all(c in table for c in comps):
                self.stats.tsp_star_shortcuts += 1
                res = tsp_star_step(table, self.game, g, blocks,
                                    self.inc.value)
                if res is not None:
                    self.inc.offer(res[0], res[1])
                return
            self.stats.tsp_star_fallbacks += 1
            log.warning("table completion unavailable below partial %s; "
                        "searching the subtree instead",
                        [hex(b) for b in blocks])
        a_bit = 1 << order[pos - 1]
        rem = full & ~covered
        game = self.game
        v = game.value
        inc = self.inc
        stats = self.stats
        bound = self.bound
        for c in g.connected_subsets(rem, required=a_bit):
            stats.nodes_expanded += 1
            stats.subsets_enumerated += 1
            self._ticks += 1
            if self._ticks % _DEADLINE_STRIDE == 0:
                if deadline_passed(self.deadline):
                    raise BudgetExceededError("deadline hit during search")
                if self.control.stop or self.crossed():
                    raise _Stopped()
            ncov = covered | c
            nval = value + v(c)
            if ncov == full:
                stats.structures_visited += 1
                if game.improves(nval, inc.value):
                    inc.offer(blocks + [c], nval)
            else:
                if bound is not None:
                    ub = bound(nval, full & ~ncov)
                    if not inc.value < ub:
                        stats.nodes_pruned += 1
                        continue
                blocks.append(c)
                self._expand(blocks, ncov, nval, pos + 1)
                blocks.pop()


def d_tsp(game: Game, g: Graph, pt: Pseudotree, bound=None, *,
          mode: str = "interleaved", on_incumbent=None,
          deadline: float | None = None,
          tsp_worker_enabled: bool = True) -> SolverResult:
    """Run the sweep and the search together until their frontiers cross.

    `mode` is "interleaved" (single worker alternating one unit each,
    deterministic) or "parallel" (two threads). `tsp_worker_enabled=False`
    parks the search worker, degenerating to the sweep alone. Hitting the
    deadline returns the incumbent with completed=False instead of raising.
    """
    require_connected(g)
    if mode not in ("interleaved", "parallel"):
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.monotonic()
    full = g.full_mask
    table = DpTable(g.n)
    inc = _Incumbent([full], game.value(full), t0, game.tolerance,
                     on_incumbent)
    control = _Control()
    sweep_stats = SearchStats()
    search_stats = SearchStats()
    sweep = _Sweep(game, g, pt, table, inc, sweep_stats, deadline, control)

    def crossed() -> bool:
        return sweep.next_level < search.next_stage

    search = _Search(game, g, pt, table, inc, search_stats, bound, deadline,
                     control, crossed)

    completed = True
    if mode == "interleaved":
        try:
            while not crossed():
                if deadline_passed(deadline):
                    completed = False
                    break
                sweep.step()
                if crossed() or not tsp_worker_enabled:
                    continue
                search.step()
        except BudgetExceededError:
            completed = False
    else:
        def run(step):
            try:
                while not control.stop and not crossed():
                    if deadline_passed(deadline):
                        control.deadline_hit = True
                        control.stop = True
                        break
                    if not step():
                        break
            except BudgetExceededError:
                control.deadline_hit = True
                control.stop = True
            except BaseException as e:
                control.error = e
                control.stop = True

        worker = None
        if tsp_worker_enabled:
            worker = threading.Thread(target=run, args=(search.step,),
                                      name="block-search", daemon=True)
            worker.start()
        run(sweep.step)
        if worker is not None:
            worker.join()
        if control.error is not None:
            raise control.error
        completed = not control.deadline_hit

    stats = sweep_stats.merged_with(search_stats)
    stats.frontier_crossed = crossed()
    blocks, value, trace = inc.snapshot()
    return SolverResult(best=Partition(blocks), best_value=value, stats=stats,
                        trace=trace, completed=completed, table=table)
