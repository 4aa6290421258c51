"""Leave and Share: stack-driven trading rounds with neighborhood sharing."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..model import AgentId, Allocation, Instance, compute_ordering
from ._base import TraceList, base_assignment, emit, prepare


@dataclass(slots=True)
class LsStack:
    """The trading stack of one round."""

    contents: list[AgentId] = field(default_factory=list)

    def push(self, agent: AgentId) -> None:
        self.contents.append(agent)

    def pop(self) -> AgentId:
        return self.contents.pop()

    def top(self) -> AgentId:
        return self.contents[-1]

    def bottom(self) -> AgentId:
        return self.contents[0]

    def __contains__(self, agent: AgentId) -> bool:
        return agent in self.contents

    def __len__(self) -> int:
        return len(self.contents)


def run_ls(
    instance: Instance,
    tie_rule: int | None = None,
    *,
    trace: TraceList = None,
) -> Allocation:
    """Run Leave and Share over the qualified agents.

    A round starts by pushing the earliest-ordered remaining agent. While the
    stack is alive, the top points at her favorite house among her live
    neighbors' plus the stack bottom's and her own; a favorite already on the
    stack pops a trading cycle, anything else is pushed. When the stack
    empties, the round's matched agents leave and their remaining neighbors
    are shared into one another's neighbor sets.
    """
    graph, qualified, rank = prepare(instance)
    ordering = compute_ordering(graph, instance.initial, tie_rule)
    # Live neighbor sets grow by sharing, so keep mutable copies.
    neighbors: dict[AgentId, set[AgentId]] = {
        i: set(instance.profiles[i].neighbors & qualified) for i in qualified
    }
    assignment = base_assignment(instance.n)
    remaining = set(qualified)
    while remaining:
        start = next(a for a in ordering.sequence if a in remaining)
        stack = LsStack()
        on_stack = {start}
        stack.push(start)
        emit(trace, {"event": "push", "agents": [start], "case": None})
        favorite: dict[AgentId, AgentId] = {}
        matched: list[AgentId] = []
        while len(stack):
            top = stack.top()
            candidates = (neighbors[top] & remaining) | {stack.bottom(), top}
            fav = min(candidates, key=rank[top].__getitem__)
            favorite[top] = fav
            if fav not in on_stack:
                stack.push(fav)
                on_stack.add(fav)
                emit(trace, {"event": "push", "agents": [fav], "case": None})
                continue
            cycle: list[AgentId] = []
            while True:
                agent = stack.pop()
                on_stack.discard(agent)
                cycle.append(agent)
                if agent == fav:
                    break
            for agent in cycle:
                assignment[agent] = favorite[agent]
            remaining.difference_update(cycle)
            matched.extend(cycle)
            emit(trace, {"event": "pop", "agents": list(cycle), "case": None})
        shared = set().union(*(neighbors[a] for a in matched)) - set(matched)
        shared &= remaining
        for agent in shared:
            neighbors[agent] |= shared - {agent}
        emit(trace, {"event": "share", "agents": sorted(shared), "case": None})
    return Allocation(assignment=assignment)
