"""Swap With Neighbors: myopic trading cycles along reported edges."""

from __future__ import annotations

from ..model import Allocation, Instance
from ._base import TraceList, base_assignment, emit, prepare
from .pointing import _functional_cycles


def run_swn(instance: Instance, *, trace: TraceList = None) -> Allocation:
    """Each round, every remaining qualified agent points at her favorite house
    among her own and her remaining reported neighbors'; all pointer cycles
    trade and leave. Allocations therefore never leave {i} union r'_i.
    """
    _, qualified, rank = prepare(instance)
    neighbors = {i: instance.profiles[i].neighbors & qualified for i in qualified}
    assignment = base_assignment(instance.n)
    remaining = set(qualified)
    while remaining:
        pointer = {
            i: min((neighbors[i] & remaining) | {i}, key=rank[i].__getitem__)
            for i in remaining
        }
        for cycle in _functional_cycles(pointer):
            for agent in cycle:
                assignment[agent] = pointer[agent]
            emit(trace, {"event": "pop", "agents": list(cycle), "case": None})
            remaining.difference_update(cycle)
    return Allocation(assignment=assignment)
