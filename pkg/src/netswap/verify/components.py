"""Component-restricted stability and efficiency checkers.

Blocking coalitions and dominating changed sets are restricted to complete
components (every ordered pair of members reports each other) or weakly
complete components (connected, with at most one unordered member pair missing
an edge in either direction). Components are read off the true relationship
graph when truth is recorded, else off the reports taken at face value.
"""

from __future__ import annotations

import itertools

from ..errors import CapExceeded
from ..model import (
    AgentId,
    Allocation,
    Instance,
    ReportedGraph,
    build_reported_graph,
    qualified_set,
)
from .report import Caps, Property, PropertyReport, Witness


def _truth_graph(instance: Instance) -> ReportedGraph:
    truth = instance.effective_truth()
    out = {i: truth[i].neighbors for i in range(1, instance.n + 1)}
    edges = frozenset((i, j) for i, js in out.items() for j in js)
    return ReportedGraph(n=instance.n, edges=edges, out=out)


def enumerate_complete_components(graph: ReportedGraph) -> list[frozenset[AgentId]]:
    """All singletons plus every member set whose ordered pairs all have edges."""
    nodes = range(1, graph.n + 1)
    mutual = {
        i: {j for j in graph.out[i] if i in graph.out[j]} for i in nodes
    }
    components = [frozenset({i}) for i in nodes]
    for size in range(2, graph.n + 1):
        for combo in itertools.combinations(nodes, size):
            group = set(combo)
            if all(group - {i} <= mutual[i] for i in combo):
                components.append(frozenset(combo))
    return components


def enumerate_weakly_complete_components(graph: ReportedGraph) -> list[frozenset[AgentId]]:
    """All connected member sets missing edges in at most one unordered pair."""
    nodes = range(1, graph.n + 1)
    components = [frozenset({i}) for i in nodes]
    for size in range(2, graph.n + 1):
        for combo in itertools.combinations(nodes, size):
            defective = 0
            for i, j in itertools.combinations(combo, 2):
                if j not in graph.out[i] or i not in graph.out[j]:
                    defective += 1
                    if defective > 1:
                        break
            if defective > 1:
                continue
            # Connectivity in the undirected sense over the induced subgraph.
            group = set(combo)
            seen = {combo[0]}
            frontier = [combo[0]]
            while frontier:
                node = frontier.pop()
                for other in group - seen:
                    if other in graph.out[node] or node in graph.out[other]:
                        seen.add(other)
                        frontier.append(other)
            if len(seen) == len(group):
                components.append(frozenset(combo))
    return components


def _blocking_search(
    allocation: Allocation,
    instance: Instance,
    components: list[frozenset[AgentId]],
    prop: Property,
    caps: Caps,
) -> PropertyReport:
    if instance.n > caps.allocation_max_n:
        raise CapExceeded(f"{prop.value} check capped at n <= {caps.allocation_max_n}")
    truth = instance.effective_truth()
    qualified = qualified_set(build_reported_graph(instance), instance.initial)
    ranks = {i: {h: k for k, h in enumerate(truth[i].preference.ranking)} for i in qualified}
    work = 0
    for component in sorted(components, key=lambda s: (len(s), tuple(sorted(s)))):
        if not component <= qualified:
            continue
        coalition = tuple(sorted(component))
        for houses in itertools.permutations(coalition):
            work += 1
            strict = False
            for agent, house in zip(coalition, houses):
                r = ranks[agent]
                if r[house] > r[allocation.assignment[agent]]:
                    break
                strict = strict or r[house] < r[allocation.assignment[agent]]
            else:
                if strict:
                    witness = Witness(
                        kind="coalition",
                        payload={
                            "members": list(coalition),
                            "reallocation": dict(zip(coalition, houses)),
                        },
                    )
                    return PropertyReport(prop, "violated", witness, work)
    return PropertyReport(prop, "holds", None, work)


def _domination_search(
    allocation: Allocation,
    instance: Instance,
    components: list[frozenset[AgentId]],
    prop: Property,
    caps: Caps,
) -> PropertyReport:
    if instance.n > caps.allocation_max_n:
        raise CapExceeded(f"{prop.value} check capped at n <= {caps.allocation_max_n}")
    truth = instance.effective_truth()
    qualified = qualified_set(build_reported_graph(instance), instance.initial)
    ranks = {i: {h: k for k, h in enumerate(truth[i].preference.ranking)} for i in qualified}
    work = 0
    for component in sorted(components, key=lambda s: (len(s), tuple(sorted(s)))):
        if len(component) < 2 or not component <= qualified:
            continue
        members = tuple(sorted(component))
        current = [allocation.assignment[i] for i in members]
        for shuffled in itertools.permutations(current):
            work += 1
            # The changed set must be the whole component: every member moves
            # to a different, strictly better house.
            if all(
                then != now and ranks[agent][then] < ranks[agent][now]
                for agent, now, then in zip(members, current, shuffled)
            ):
                full = dict(allocation.assignment)
                full.update(zip(members, shuffled))
                witness = Witness(
                    kind="domination",
                    payload={"alternative": full, "improved": list(members)},
                )
                return PropertyReport(prop, "violated", witness, work)
    return PropertyReport(prop, "holds", None, work)


def check_stable_cc(
    allocation: Allocation, instance: Instance, caps: Caps | None = None
) -> PropertyReport:
    """No complete component of qualified agents may block with its endowments."""
    caps = caps or Caps()
    components = enumerate_complete_components(_truth_graph(instance))
    return _blocking_search(allocation, instance, components, Property.STABLE_CC, caps)


def check_optimal_cc(
    allocation: Allocation, instance: Instance, caps: Caps | None = None
) -> PropertyReport:
    """No dominating reallocation may change exactly one complete component."""
    caps = caps or Caps()
    components = enumerate_complete_components(_truth_graph(instance))
    return _domination_search(allocation, instance, components, Property.OPTIMAL_CC, caps)


def check_stable_wcc(
    allocation: Allocation, instance: Instance, caps: Caps | None = None
) -> PropertyReport:
    """No weakly complete component of qualified agents may block."""
    caps = caps or Caps()
    components = enumerate_weakly_complete_components(_truth_graph(instance))
    return _blocking_search(allocation, instance, components, Property.STABLE_WCC, caps)


def check_optimal_wcc(
    allocation: Allocation, instance: Instance, caps: Caps | None = None
) -> PropertyReport:
    """No dominating reallocation may change exactly one weakly complete component."""
    caps = caps or Caps()
    components = enumerate_weakly_complete_components(_truth_graph(instance))
    return _domination_search(allocation, instance, components, Property.OPTIMAL_WCC, caps)
