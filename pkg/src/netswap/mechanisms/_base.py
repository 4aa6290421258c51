"""Per-run scaffolding shared by the mechanism implementations."""

from __future__ import annotations

from ..model import (
    AgentId,
    Instance,
    ReportedGraph,
    build_reported_graph,
    qualified_set,
)

TraceList = list[dict] | None


def prepare(
    instance: Instance,
) -> tuple[ReportedGraph, frozenset[AgentId], dict[AgentId, dict[AgentId, int]]]:
    """Reported graph, qualified set, and per-agent house-rank lookup."""
    graph = build_reported_graph(instance)
    qualified = qualified_set(graph, instance.initial)
    rank = {
        i: {h: k for k, h in enumerate(instance.profiles[i].preference.ranking)}
        for i in qualified
    }
    return graph, qualified, rank


def base_assignment(n: int) -> dict[AgentId, AgentId]:
    """Everyone starts at her endowment; mechanisms overwrite qualified entries."""
    return {i: i for i in range(1, n + 1)}


def emit(trace: TraceList, event: dict) -> None:
    if trace is not None:
        trace.append(event)
