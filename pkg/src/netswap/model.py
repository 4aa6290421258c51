"""Core data model for housing markets on social networks.

Agents 1..n each own one house; house j is named after its owner j. Every agent
reports a strict preference over all houses and a set of neighbors. Reported
neighbor sets induce a directed graph; only agents reachable from the initial
set take part in a matching, everyone else keeps her own house.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from .errors import (
    EmptyCandidateSet,
    EmptyInitialSet,
    InitialOutOfRange,
    MalformedJson,
    NeighborOutOfRange,
    NonPermutationPreference,
    ReportExceedsTruth,
    SelfNeighbor,
)

AgentId = int


@dataclass(frozen=True, slots=True)
class Preference:
    """Strict ranking over houses, most preferred first."""

    ranking: tuple[AgentId, ...]

    def rank_of(self, house: AgentId) -> int:
        return self.ranking.index(house)

    def prefers(self, first: AgentId, second: AgentId) -> bool:
        """True when house `first` is ranked strictly above house `second`."""
        return self.ranking.index(first) < self.ranking.index(second)


@dataclass(frozen=True, slots=True)
class AgentType:
    """One agent's report: a preference plus a neighbor set."""

    preference: Preference
    neighbors: frozenset[AgentId]


@dataclass(frozen=True, slots=True)
class Instance:
    """A housing market.

    `profiles` holds the reported types the mechanisms operate on. `truth`,
    when present, holds the true types used by the property checkers; reported
    neighbor sets must be subsets of the true ones.
    """

    n: int
    initial: frozenset[AgentId]
    profiles: dict[AgentId, AgentType]
    truth: dict[AgentId, AgentType] | None = None

    def effective_truth(self) -> dict[AgentId, AgentType]:
        """True profiles when recorded, else the reports taken at face value."""
        return self.truth if self.truth is not None else self.profiles


@dataclass(frozen=True, slots=True)
class ReportedGraph:
    """Directed graph over agents: edge (i, j) present iff i reports j."""

    n: int
    edges: frozenset[tuple[AgentId, AgentId]]
    out: dict[AgentId, frozenset[AgentId]]


@dataclass(frozen=True, slots=True)
class Ordering:
    """A processing order over qualified agents and its inverse."""

    sequence: tuple[AgentId, ...]
    position: dict[AgentId, int]


@dataclass(frozen=True, slots=True)
class Allocation:
    """Maps every agent to the owner of the house she receives."""

    assignment: dict[AgentId, AgentId]

    def house_of(self, agent: AgentId) -> AgentId:
        return self.assignment[agent]

    def as_tuple(self) -> tuple[AgentId, ...]:
        return tuple(self.assignment[i] for i in sorted(self.assignment))


def _check_agent_ids(ids: Iterable[int], n: int, what: str) -> None:
    for a in ids:
        if not isinstance(a, int) or isinstance(a, bool) or not 1 <= a <= n:
            raise NeighborOutOfRange(f"{what} contains invalid agent id {a!r}")


def _parse_profiles(raw: Mapping, n: int, key: str) -> dict[AgentId, AgentType]:
    block = raw[key]
    if not isinstance(block, Mapping):
        raise MalformedJson(f"{key!r} must be an object keyed by agent id")
    profiles: dict[AgentId, AgentType] = {}
    for raw_id, entry in block.items():
        try:
            agent = int(raw_id)
        except (TypeError, ValueError):
            raise MalformedJson(f"profile key {raw_id!r} is not an agent id") from None
        if not 1 <= agent <= n:
            raise MalformedJson(f"profile key {agent} outside 1..{n}")
        if agent in profiles:
            raise MalformedJson(f"duplicate profile for agent {agent}")
        if not isinstance(entry, Mapping) or "pref" not in entry or "neighbors" not in entry:
            raise MalformedJson(f"profile of agent {agent} must have 'pref' and 'neighbors'")
        pref = entry["pref"]
        if not isinstance(pref, (list, tuple)) or sorted(pref) != list(range(1, n + 1)):
            raise NonPermutationPreference(
                f"pref of agent {agent} is not a permutation of 1..{n}: {pref!r}"
            )
        neighbors = entry["neighbors"]
        if not isinstance(neighbors, (list, tuple, set, frozenset)):
            raise MalformedJson(f"neighbors of agent {agent} must be an array")
        _check_agent_ids(neighbors, n, f"neighbors of agent {agent}")
        if agent in neighbors:
            raise SelfNeighbor(f"agent {agent} lists herself as a neighbor")
        profiles[agent] = AgentType(
            preference=Preference(tuple(int(h) for h in pref)),
            neighbors=frozenset(int(j) for j in neighbors),
        )
    missing = set(range(1, n + 1)) - set(profiles)
    if missing:
        raise MalformedJson(f"missing profiles for agents {sorted(missing)}")
    return profiles


def validate_instance(raw: Mapping) -> Instance:
    """Build a validated Instance from an untyped description.

    Structural problems raise MalformedJson; semantic ones raise the dedicated
    error types (NonPermutationPreference, NeighborOutOfRange, SelfNeighbor,
    EmptyInitialSet, InitialOutOfRange, ReportExceedsTruth).
    """
    if not isinstance(raw, Mapping):
        raise MalformedJson("instance description must be an object")
    for required in ("n", "initial", "profiles"):
        if required not in raw:
            raise MalformedJson(f"missing top-level key {required!r}")
    n = raw["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedJson(f"'n' must be a positive integer, got {n!r}")
    initial_raw = raw["initial"]
    if not isinstance(initial_raw, (list, tuple, set, frozenset)):
        raise MalformedJson("'initial' must be an array of agent ids")
    if len(initial_raw) == 0:
        raise EmptyInitialSet("initial agent set is empty")
    for a in initial_raw:
        if not isinstance(a, int) or isinstance(a, bool) or not 1 <= a <= n:
            raise InitialOutOfRange(f"initial agent id {a!r} outside 1..{n}")
    initial = frozenset(int(a) for a in initial_raw)

    profiles = _parse_profiles(raw, n, "profiles")
    truth: dict[AgentId, AgentType] | None = None
    if raw.get("truth") is not None:
        truth = _parse_profiles(raw, n, "truth")
        for agent in range(1, n + 1):
            extra = profiles[agent].neighbors - truth[agent].neighbors
            if extra:
                raise ReportExceedsTruth(
                    f"agent {agent} reports non-neighbors {sorted(extra)}"
                )
    return Instance(n=n, initial=initial, profiles=profiles, truth=truth)


def build_reported_graph(instance: Instance) -> ReportedGraph:
    """Directed graph with an edge (i, j) for every reported neighbor j of i."""
    out = {i: instance.profiles[i].neighbors for i in range(1, instance.n + 1)}
    edges = frozenset((i, j) for i, js in out.items() for j in js)
    return ReportedGraph(n=instance.n, edges=edges, out=out)


def qualified_set(graph: ReportedGraph, initial: frozenset[AgentId]) -> frozenset[AgentId]:
    """Agents reachable from the initial set along reported edges."""
    seen = set(initial)
    queue = deque(initial)
    while queue:
        i = queue.popleft()
        for j in graph.out[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    return frozenset(seen)


def compute_ordering(
    graph: ReportedGraph,
    initial: frozenset[AgentId],
    tie_rule: int | None = None,
) -> Ordering:
    """Order qualified agents by reported-graph distance from the initial set.

    Distance ties break to ascending agent id by default; an integer tie_rule
    seeds a deterministic shuffle within each equal-distance group instead.
    """
    dist: dict[AgentId, int] = {i: 0 for i in initial}
    queue = deque(sorted(initial))
    while queue:
        i = queue.popleft()
        for j in sorted(graph.out[i]):
            if j not in dist:
                dist[j] = dist[i] + 1
                queue.append(j)
    groups: dict[int, list[AgentId]] = {}
    for agent, d in dist.items():
        groups.setdefault(d, []).append(agent)
    rng = random.Random(tie_rule) if tie_rule is not None else None
    sequence: list[AgentId] = []
    for d in sorted(groups):
        group = sorted(groups[d])
        if rng is not None:
            rng.shuffle(group)
        sequence.extend(group)
    return Ordering(sequence=tuple(sequence), position={a: k for k, a in enumerate(sequence)})


def favorite_in(preference: Preference, candidates: Iterable[AgentId]) -> AgentId:
    """Most preferred house among the candidate owners."""
    pool = set(candidates)
    if not pool:
        raise EmptyCandidateSet("no candidate houses to choose from")
    for house in preference.ranking:
        if house in pool:
            return house
    raise EmptyCandidateSet(f"candidates {sorted(pool)} not in preference ranking")
