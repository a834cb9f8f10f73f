"""Shared solver types: run statistics, results, and control errors."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from ..games import Partition, Value
from ..graph import DisconnectedGraphError, Graph

if TYPE_CHECKING:
    from .dptable import DpTable


class BudgetExceededError(RuntimeError):
    """A solver hit its wall-clock deadline before finishing."""


class InternalInvariantError(RuntimeError):
    """A solver's own bookkeeping broke; results would be untrustworthy."""


@dataclass(slots=True)
class SearchStats:
    """Work counters exposed on every result so benchmarks can compare
    effort, not just wall time."""

    subsets_enumerated: int = 0
    dp_subproblems: int = 0
    nodes_expanded: int = 0
    nodes_pruned: int = 0
    structures_visited: int = 0
    tsp_star_shortcuts: int = 0
    tsp_star_fallbacks: int = 0
    frontier_crossed: bool = False

    def merged_with(self, other: "SearchStats") -> "SearchStats":
        return SearchStats(
            subsets_enumerated=self.subsets_enumerated + other.subsets_enumerated,
            dp_subproblems=self.dp_subproblems + other.dp_subproblems,
            nodes_expanded=self.nodes_expanded + other.nodes_expanded,
            nodes_pruned=self.nodes_pruned + other.nodes_pruned,
            structures_visited=self.structures_visited + other.structures_visited,
            tsp_star_shortcuts=self.tsp_star_shortcuts + other.tsp_star_shortcuts,
            tsp_star_fallbacks=self.tsp_star_fallbacks + other.tsp_star_fallbacks,
            frontier_crossed=self.frontier_crossed or other.frontier_crossed,
        )


# (elapsed_microseconds, incumbent_value) points; values never decrease.
TracePoint = tuple[int, Value]


@dataclass(slots=True)
class SolverResult:
    best: Partition
    best_value: Value
    stats: SearchStats
    trace: list[TracePoint] = field(default_factory=list)
    completed: bool = True
    table: "DpTable | None" = None


def require_connected(g: Graph) -> None:
    if not g.is_connected(g.full_mask):
        raise DisconnectedGraphError(
            "solver requires a connected graph; split per component first")


def elapsed_us(t0: float) -> int:
    return int((time.monotonic() - t0) * 1_000_000)


def deadline_passed(deadline: float | None) -> bool:
    return deadline is not None and time.monotonic() >= deadline
