"""Favorite-pointing graphs and cycle detection shared by the mechanisms."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NoLowerCandidate
from ..model import AgentId, Instance, Preference, favorite_in


@dataclass(frozen=True, slots=True)
class Cycle:
    """A pointer cycle; members appear in pointer order from the entry point."""

    members: tuple[AgentId, ...]


@dataclass(slots=True)
class FavoritePointingGraph:
    """Current pointer of every active agent; mutated as pointers descend."""

    pointer: dict[AgentId, AgentId]


def build_favorite_pointing(instance: Instance, qualified: frozenset[AgentId]) -> FavoritePointingGraph:
    """Point every qualified agent at the owner of her favorite qualified house."""
    pointer = {
        i: favorite_in(instance.profiles[i].preference, qualified)
        for i in sorted(qualified)
    }
    return FavoritePointingGraph(pointer=pointer)


def next_favorite(
    preference: Preference,
    current_pointer: AgentId,
    qualified: frozenset[AgentId] | set[AgentId],
) -> AgentId:
    """Owner of the best candidate house ranked strictly below the current pointer's."""
    start = preference.ranking.index(current_pointer) + 1
    for house in preference.ranking[start:]:
        if house in qualified:
            return house
    raise NoLowerCandidate(
        f"nothing ranked below house {current_pointer} among {sorted(qualified)}"
    )


def detect_cycle_from(
    start: AgentId, pointing: FavoritePointingGraph
) -> tuple[tuple[AgentId, ...], Cycle]:
    """Follow pointers from `start` until an agent repeats.

    Returns the walk and the cycle it runs into; the cycle preserves walk order
    from its entry point.
    """
    seen_at: dict[AgentId, int] = {}
    walk: list[AgentId] = []
    current = start
    while current not in seen_at:
        seen_at[current] = len(walk)
        walk.append(current)
        current = pointing.pointer[current]
    return tuple(walk), Cycle(members=tuple(walk[seen_at[current]:]))


def _functional_cycles(pointer: dict[AgentId, AgentId]) -> list[tuple[AgentId, ...]]:
    """All cycles of a pointer map, each rotated to start at its minimum member."""
    state: dict[AgentId, int] = {}  # 0 while on the current walk, 1 when finished
    cycles: list[tuple[AgentId, ...]] = []
    for start in sorted(pointer):
        if start in state:
            continue
        walk: list[AgentId] = []
        current = start
        while current not in state:
            state[current] = 0
            walk.append(current)
            current = pointer[current]
        if state[current] == 0:
            cycle = walk[walk.index(current):]
            pivot = cycle.index(min(cycle))
            cycles.append(tuple(cycle[pivot:] + cycle[:pivot]))
        for agent in walk:
            state[agent] = 1
    return cycles
