"""Top trading cycles over the qualified agents, ignoring the network."""

from __future__ import annotations

from ..model import Allocation, Instance
from ._base import TraceList, base_assignment, emit, prepare
from .pointing import _functional_cycles


def run_ttc(instance: Instance, *, trace: TraceList = None) -> Allocation:
    """Classic top trading cycles restricted to the qualified agents.

    Every remaining agent points at her favorite remaining house regardless of
    the reported network; all pointer cycles trade and leave. Unqualified
    agents keep their endowments.
    """
    _, qualified, rank = prepare(instance)
    assignment = base_assignment(instance.n)
    remaining = set(qualified)
    while remaining:
        pointer = {i: min(remaining, key=rank[i].__getitem__) for i in remaining}
        for cycle in _functional_cycles(pointer):
            for agent in cycle:
                assignment[agent] = pointer[agent]
            emit(trace, {"event": "pop", "agents": list(cycle), "case": None})
            remaining.difference_update(cycle)
    return Allocation(assignment=assignment)
