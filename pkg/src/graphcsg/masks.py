"""Bitmask agent-set helpers.

An agent set is a plain int: bit i set means agent i belongs to the set.
Bitwise ops give exact set algebra with no allocation in solver loops, so
everything downstream (graphs, games, solvers) passes masks around.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator

AgentSet = int


def mask_of(agents: Iterable[int]) -> int:
    """Build a mask from agent indices."""
    m = 0
    for a in agents:
        m |= 1 << a
    return m


def agents_of(mask: int) -> list[int]:
    """List the agent indices of a mask in ascending order."""
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def iter_agents(mask: int) -> Iterator[int]:
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def lowest_agent(mask: int) -> int:
    if mask == 0:
        raise ValueError("empty agent set")
    return (mask & -mask).bit_length() - 1
