"""Connected Trading Cycles: network-respecting trading via marked paths.

A pointer cycle may only trade once it forms the minimum strongly connected,
pointing-closed component of the reported subgraph induced by the agents still
in the market. Until then, one carefully chosen agent per iteration switches
her pointer to her next favorite house, guided by shortest paths whose edges
are marked by their owners.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass

from ..model import (
    AgentId,
    Allocation,
    Instance,
    Ordering,
    Preference,
    ReportedGraph,
    compute_ordering,
)
from ._base import TraceList, base_assignment, emit, prepare
from .pointing import (
    Cycle,
    FavoritePointingGraph,
    build_favorite_pointing,
    detect_cycle_from,
    next_favorite,
)

Edge = tuple[AgentId, AgentId]


@dataclass(frozen=True, slots=True)
class MarkedSubgraph:
    """Induced subgraph on a component with accumulated per-edge owner marks."""

    nodes: frozenset[AgentId]
    edges: frozenset[Edge]
    marks: dict[Edge, frozenset[AgentId]]


@dataclass(frozen=True, slots=True)
class PathDetectionOutput:
    """Component, marked subgraph, and each member's final processed path."""

    component: frozenset[AgentId]
    marked: MarkedSubgraph
    paths: dict[AgentId, tuple[AgentId, ...]]


def _strongly_connected(nodes: frozenset[AgentId], graph: ReportedGraph) -> bool:
    if len(nodes) == 1:
        return True
    out = {i: graph.out[i] & nodes for i in nodes}
    into: dict[AgentId, set[AgentId]] = {i: set() for i in nodes}
    for i in nodes:
        for j in out[i]:
            into[j].add(i)
    for adjacency in (out, into):
        start = next(iter(nodes))
        seen = {start}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for other in adjacency[node]:
                if other not in seen:
                    seen.add(other)
                    queue.append(other)
        if len(seen) != len(nodes):
            return False
    return True


def minimal_closed_components(
    cycle: Cycle,
    graph: ReportedGraph,
    pointing: FavoritePointingGraph,
    ordering: Ordering,
) -> list[frozenset[AgentId]]:
    """All smallest pointing-closed, strongly connected supersets of the cycle.

    Candidates live inside the pointing graph's domain (the agents still in
    the market) and are ordered by their sorted ordering-position tuples, so
    earlier-ordered connectors come first; no candidate yields an empty list.
    """
    members = frozenset(cycle.members)
    extras = sorted(frozenset(pointing.pointer) - members)
    pointer = pointing.pointer
    position = ordering.position
    for size in range(len(extras) + 1):
        found: list[tuple[tuple[int, ...], frozenset[AgentId]]] = []
        for combo in itertools.combinations(extras, size):
            candidate = members | frozenset(combo)
            if not all(pointer[i] in candidate for i in candidate):
                continue
            if not _strongly_connected(candidate, graph):
                continue
            found.append((tuple(sorted(position[i] for i in candidate)), candidate))
        if found:
            found.sort(key=lambda entry: entry[0])
            return [candidate for _, candidate in found]
    return []


def minimum_closed_component(
    cycle: Cycle,
    instance: Instance,
    graph: ReportedGraph,
    pointing: FavoritePointingGraph,
    ordering: Ordering,
) -> frozenset[AgentId]:
    """The component path detection runs on; empty when none qualifies.

    Equal-cardinality ties break to the first candidate, in ordering-position
    order, whose forced pointer switch leaves the switching agent a live
    option other than her own house. A switch onto the own house ends that
    agent's trading for good, so components that avoid one keep more of the
    market alive; when every candidate forces such a dead end the position
    order alone decides.
    """
    candidates = minimal_closed_components(cycle, graph, pointing, ordering)
    if not candidates:
        return frozenset()
    if len(candidates) == 1:
        return candidates[0]
    active = set(pointing.pointer)
    preferences = {i: instance.profiles[i].preference for i in active}
    for candidate in candidates:
        detection = _mark_component(candidate, graph, pointing, ordering)
        resolved = _resolution(cycle, detection, graph, pointing, ordering, preferences, active)
        if resolved is None:
            return candidate
        _, agent, _ = resolved
        if next_favorite(preferences[agent], pointing.pointer[agent], active) != agent:
            return candidate
    return candidates[0]


class _PathEnumerator:
    """Simple paths from one agent to another, ordered by (length, sequence).

    Paths are generated on demand by iterative deepening so that dense
    subgraphs only pay for the lengths actually requested.
    """

    def __init__(self, out: dict[AgentId, list[AgentId]], start: AgentId, target: AgentId):
        self._out = out
        self._start = start
        self._target = target
        self._max_edges = len(out) - 1
        self._depth = 0  # number of edges already swept
        self.found: list[tuple[AgentId, ...]] = []
        if start == target:
            self.found.append((start,))
            self._depth = self._max_edges  # a trivial path; no simple non-trivial ones exist

    def get(self, index: int) -> tuple[AgentId, ...] | None:
        while len(self.found) <= index and self._depth < self._max_edges:
            self._depth += 1
            self._collect(self._depth)
        return self.found[index] if index < len(self.found) else None

    def _collect(self, edge_count: int) -> None:
        # Depth-first over sorted neighbors yields lexicographic order per length.
        def extend(node: AgentId, path: tuple[AgentId, ...], seen: frozenset[AgentId]) -> None:
            if len(path) == edge_count + 1:
                if node == self._target:
                    self.found.append(path)
                return
            for nxt in self._out[node]:
                if nxt not in seen:
                    extend(nxt, path + (nxt,), seen | {nxt})

        extend(self._start, (self._start,), frozenset({self._start}))


def path_detection(
    cycle: Cycle,
    instance: Instance,
    graph: ReportedGraph,
    pointing: FavoritePointingGraph,
    ordering: Ordering,
) -> PathDetectionOutput:
    """Mark shortest paths from every component member to her pointing.

    Members are processed by ascending path length, ties by ordering position.
    A processed path stamps its owner's mark on every edge; marks accumulate
    and are never retracted. An owner whose path carries foreign marks retries
    with her next (length, sequence)-ordered simple path, if any. Agents
    pointing at themselves pre-mark all their outgoing edges.
    """
    component = minimum_closed_component(cycle, instance, graph, pointing, ordering)
    if not component:
        empty = MarkedSubgraph(nodes=frozenset(), edges=frozenset(), marks={})
        return PathDetectionOutput(component=frozenset(), marked=empty, paths={})
    return _mark_component(component, graph, pointing, ordering)


def _mark_component(
    component: frozenset[AgentId],
    graph: ReportedGraph,
    pointing: FavoritePointingGraph,
    ordering: Ordering,
) -> PathDetectionOutput:
    out = {i: sorted(graph.out[i] & component) for i in component}
    edges = frozenset((i, j) for i in component for j in out[i])
    marks: dict[Edge, set[AgentId]] = {e: set() for e in edges}
    pointer = pointing.pointer
    for i in sorted(component):
        if pointer[i] == i:
            for j in out[i]:
                marks[(i, j)].add(i)
    enumerators = {i: _PathEnumerator(out, i, pointer[i]) for i in component}
    cursor = {i: 0 for i in component}
    final_path: dict[AgentId, tuple[AgentId, ...]] = {}
    heap: list[tuple[int, int, AgentId]] = []
    for i in component:
        first = enumerators[i].get(0)
        if first is not None:
            heap.append((len(first) - 1, ordering.position[i], i))
    heapq.heapify(heap)
    while heap:
        _, _, owner = heapq.heappop(heap)
        path = enumerators[owner].get(cursor[owner])
        assert path is not None
        cursor[owner] += 1
        path_edges = list(zip(path, path[1:]))
        for e in path_edges:
            marks[e].add(owner)
        final_path[owner] = path
        if any(marks[e] - {owner} for e in path_edges):
            nxt = enumerators[owner].get(cursor[owner])
            if nxt is not None:
                heapq.heappush(heap, (len(nxt) - 1, ordering.position[owner], owner))
    marked = MarkedSubgraph(
        nodes=component,
        edges=edges,
        marks={e: frozenset(s) for e, s in marks.items()},
    )
    return PathDetectionOutput(component=component, marked=marked, paths=final_path)


def compute_S(output: PathDetectionOutput, pointing: FavoritePointingGraph) -> frozenset[AgentId]:
    """Members with no exclusively-marked path to their pointing and with no
    outgoing edge marked by anyone else."""
    marks = output.marked.marks
    chosen: set[AgentId] = set()
    for i in sorted(output.component):
        if any(tail == i and (mark - {i}) for (tail, _), mark in marks.items()):
            continue
        own_out: dict[AgentId, list[AgentId]] = {}
        for (tail, head), mark in marks.items():
            if mark == {i}:
                own_out.setdefault(tail, []).append(head)
        target = pointing.pointer[i]
        seen = {i}
        queue = deque([i])
        reached = i == target
        while queue and not reached:
            node = queue.popleft()
            for nxt in own_out.get(node, ()):
                if nxt == target:
                    reached = True
                    break
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        if not reached:
            chosen.add(i)
    return frozenset(chosen)


def _connects(
    graph: ReportedGraph, active: set[AgentId], start: AgentId, target: AgentId
) -> bool:
    """Directed reachability inside the subgraph induced by active agents."""
    if start == target:
        return True
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nxt in graph.out[node]:
            if nxt == target:
                return True
            if nxt in active and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def _pick_isolated(
    cycle: Cycle, graph: ReportedGraph, pointer: dict[AgentId, AgentId], active: set[AgentId]
) -> AgentId:
    # c.i: last cycle member, in walk order, with no path to her pointing.
    blocked = [
        a for a in cycle.members if not _connects(graph, active, a, pointer[a])
    ]
    return blocked[-1] if blocked else cycle.members[-1]


def _pick_extension(
    cycle: Cycle,
    detection: PathDetectionOutput,
    graph: ReportedGraph,
    pointing: FavoritePointingGraph,
    ordering: Ordering,
) -> AgentId:
    # c.iii: only cycle members may switch, the last such agent so the front
    # of the cycle survives. Walk pointers from the pointing of the earliest
    # ordered outside member; the last visited cycle member whose path crosses
    # the outside part switches. When the walk never meets the cycle, fall
    # back to the last cycle member with no in-cycle route to her pointing
    # (one exists, else the cycle would be strongly connected on its own).
    cycle_set = set(cycle.members)
    rest = detection.component - cycle_set
    pointer = pointing.pointer
    j = min(rest, key=ordering.position.__getitem__)
    sequence: list[AgentId] = []
    seen: set[AgentId] = set()
    current = pointer[j]
    while current not in seen:
        seen.add(current)
        sequence.append(current)
        current = pointer[current]
    paths = detection.paths
    primary = [
        a for a in sequence if a in cycle_set and any(v in rest for v in paths[a])
    ]
    if primary:
        return primary[-1]
    fallback = [
        a for a in cycle.members if not _connects(graph, cycle_set, a, pointer[a])
    ]
    if fallback:
        return fallback[-1]
    return cycle.members[-1]


def _pick_covering(
    chosen: frozenset[AgentId],
    detection: PathDetectionOutput,
    ordering: Ordering,
    pointing: FavoritePointingGraph,
    preferences: dict[AgentId, Preference],
    active: set[AgentId],
) -> AgentId:
    # c.v: a cycle member of S whose path contains another member's first path
    # edge switches. Members that still have a live option other than their
    # own house are preferred; within a class the earliest-ordered covering
    # agent wins, then the earliest-ordered agent outright.
    paths = detection.paths
    first_edge = {
        i: (p[0], p[1]) for i, p in paths.items() if len(p) > 1
    }
    ranked = sorted(chosen, key=ordering.position.__getitem__)
    live = [
        i
        for i in ranked
        if next_favorite(preferences[i], pointing.pointer[i], active) != i
    ]

    def best(pool: list[AgentId]) -> AgentId | None:
        for i in pool:
            p = paths[i]
            own_edges = set(zip(p, p[1:]))
            if any(j != i and fe in own_edges for j, fe in first_edge.items()):
                return i
        return pool[0] if pool else None

    return best(live) or best(ranked)


def _resolution(
    cycle: Cycle,
    detection: PathDetectionOutput,
    graph: ReportedGraph,
    pointing: FavoritePointingGraph,
    ordering: Ordering,
    preferences: dict[AgentId, Preference],
    active: set[AgentId],
) -> tuple[str, AgentId, frozenset[AgentId]] | None:
    """The single forced pointer switch for a non-empty component, or None
    when the cycle equals the component and every path is exclusive (trade).

    An outside member of S switches first (c.iv), but only if she still has a
    live option below her pointer other than her own house. Ejecting her onto
    her endowment ends her trading for good, so when every outside candidate
    is in that last-resort state the resolution passes to the cycle side
    instead: c.v over the cycle members of S, or c.iii when S has none.
    """
    component = detection.component
    cycle_set = set(cycle.members)
    chosen = compute_S(detection, pointing)
    if not chosen and cycle_set == component:
        return None
    if not chosen:
        picked = _pick_extension(cycle, detection, graph, pointing, ordering)
        return "c.iii", picked, chosen
    outside = (component - cycle_set) & chosen
    movable = [
        a
        for a in sorted(outside, key=ordering.position.__getitem__)
        if next_favorite(preferences[a], pointing.pointer[a], active) != a
    ]
    inside = chosen & cycle_set
    if movable:
        return "c.iv", movable[0], chosen
    if inside:
        picked = _pick_covering(inside, detection, ordering, pointing, preferences, active)
        return "c.v", picked, chosen
    picked = _pick_extension(cycle, detection, graph, pointing, ordering)
    return "c.iii", picked, chosen


def run_ctc(
    instance: Instance,
    tie_rule: int | None = None,
    *,
    trace: TraceList = None,
) -> Allocation:
    """Run Connected Trading Cycles over the qualified agents.

    Each iteration walks pointers from the earliest-ordered active agent to a
    cycle, runs path detection on its minimum closed component T, computes the
    switch candidates S, and resolves exactly one case: trade the cycle when
    it equals T and S is empty, otherwise switch one agent's pointer down.
    """
    graph, qualified, _ = prepare(instance)
    ordering = compute_ordering(graph, instance.initial, tie_rule)
    preferences = {i: instance.profiles[i].preference for i in qualified}
    pointing = build_favorite_pointing(instance, qualified)
    pointer = pointing.pointer
    active = set(qualified)
    assignment = base_assignment(instance.n)
    budget = instance.n + instance.n * instance.n  # pointer-descent bound
    step = 0
    while active:
        step += 1
        if step > budget:
            raise RuntimeError("pointer descent exceeded its iteration bound")
        start = next(a for a in ordering.sequence if a in active)
        _, cycle = detect_cycle_from(start, pointing)
        detection = path_detection(cycle, instance, graph, pointing, ordering)
        component = detection.component

        def switch(agent: AgentId, case: str, chosen: frozenset[AgentId]) -> None:
            target = next_favorite(preferences[agent], pointer[agent], active)
            pointer[agent] = target
            emit(
                trace,
                {
                    "event": "switch",
                    "agents": [agent],
                    "case": case,
                    "step": step,
                    "to": target,
                    "cycle": list(cycle.members),
                    "T": sorted(component),
                    "S": sorted(chosen),
                },
            )

        if not component:
            switch(_pick_isolated(cycle, graph, pointer, active), "c.i", frozenset())
            continue
        resolved = _resolution(cycle, detection, graph, pointing, ordering, preferences, active)
        if resolved is None:
            traded = sorted(component)
            for agent in traded:
                assignment[agent] = pointer[agent]
            active.difference_update(component)
            for agent in traded:
                del pointer[agent]
            emit(
                trace,
                {
                    "event": "settle",
                    "agents": traded,
                    "case": "c.ii",
                    "step": step,
                    "cycle": list(cycle.members),
                    "T": traded,
                    "S": [],
                },
            )
            for agent in ordering.sequence:
                if agent in active and pointer[agent] not in active:
                    target = next_favorite(preferences[agent], pointer[agent], active)
                    pointer[agent] = target
                    emit(
                        trace,
                        {
                            "event": "switch",
                            "agents": [agent],
                            "case": "c.ii",
                            "step": step,
                            "to": target,
                        },
                    )
        else:
            case, agent, chosen = resolved
            switch(agent, case, chosen)
    return Allocation(assignment=assignment)
