"""Report and witness types shared by the property checkers."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..model import AgentId, AgentType, Allocation, Instance, Preference


class Property(str, Enum):
    IR = "ir"
    IC = "ic"
    PO = "po"
    STABILITY = "stability"
    STABLE_CC = "stable-cc"
    OPTIMAL_CC = "optimal-cc"
    STABLE_WCC = "stable-wcc"
    OPTIMAL_WCC = "optimal-wcc"


@dataclass(frozen=True, slots=True)
class Caps:
    """Enumeration budgets for the brute-force checkers.

    max_n and max_pref_perms bound the incentive check's per-agent preference
    enumeration; enumerate_neighbors toggles its neighbor-subset enumeration.
    ir_enumeration_n bounds the sizes at which others' reports are enumerated
    for individual rationality, and allocation_max_n bounds the allocation
    enumerations behind the efficiency and stability checks.
    """

    max_n: int = 5
    max_pref_perms: int = 120
    enumerate_neighbors: bool = True
    ir_enumeration_n: int = 4
    allocation_max_n: int = 8


@dataclass(frozen=True, slots=True)
class Witness:
    """A replayable certificate of a property violation.

    kind is "misreport" (payload: agent, pref, neighbors, baseline, gained,
    and for hurt-by-others cases a reports map plus house/endowment),
    "coalition" (payload: members, reallocation) or "domination" (payload:
    alternative, improved).
    """

    kind: str
    payload: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.payload}


@dataclass(frozen=True, slots=True)
class PropertyReport:
    property: Property
    verdict: str  # "holds" | "violated"
    witness: Witness | None
    work: int

    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_json(self) -> dict:
        return {
            "property": self.property.value,
            "verdict": self.verdict,
            "witness": self.witness.to_json() if self.witness else None,
            "work": self.work,
        }


def replay_misreport(mechanism, instance: Instance, witness: Witness) -> bool:
    """Re-run the mechanism on the witnessed deviation and confirm the claim."""
    payload = witness.payload
    truth = instance.effective_truth()
    profiles = dict(instance.profiles)
    if "reports" in payload:
        # Others deviate; the named agent reports truthfully and is hurt.
        agent = payload["agent"]
        profiles[agent] = truth[agent]
        for key, spec in payload["reports"].items():
            other = int(key)
            profiles[other] = AgentType(
                preference=Preference(tuple(spec["pref"])),
                neighbors=frozenset(spec["neighbors"]),
            )
        deviated = Instance(instance.n, instance.initial, profiles, instance.truth)
        got = mechanism(deviated).assignment[agent]
        true_pref = truth[agent].preference
        return got == payload["house"] and true_pref.rank_of(got) > true_pref.rank_of(agent)
    agent = payload["agent"]
    profiles[agent] = AgentType(
        preference=Preference(tuple(payload["pref"])),
        neighbors=frozenset(payload["neighbors"]),
    )
    deviated = Instance(instance.n, instance.initial, profiles, instance.truth)
    got = mechanism(deviated).assignment[agent]
    true_pref = truth[agent].preference
    return got == payload["gained"] and true_pref.prefers(got, payload["baseline"])


def replay_coalition(allocation: Allocation, instance: Instance, witness: Witness) -> bool:
    """Confirm the witnessed coalition blocks the allocation."""
    payload = witness.payload
    members: list[AgentId] = list(payload["members"])
    realloc = {int(k): v for k, v in payload["reallocation"].items()}
    houses = sorted(members)
    if sorted(realloc) != houses or sorted(realloc.values()) != houses:
        return False
    truth = instance.effective_truth()
    strict = False
    for agent in members:
        pref = truth[agent].preference
        current = allocation.assignment[agent]
        proposed = realloc[agent]
        if pref.rank_of(proposed) > pref.rank_of(current):
            return False
        if proposed != current:
            strict = strict or pref.prefers(proposed, current)
    return strict


def replay_domination(allocation: Allocation, instance: Instance, witness: Witness) -> bool:
    """Confirm the witnessed alternative weakly improves everyone, someone strictly."""
    payload = witness.payload
    alternative = {int(k): v for k, v in payload["alternative"].items()}
    truth = instance.effective_truth()
    strict = False
    for agent, current in allocation.assignment.items():
        proposed = alternative[agent]
        pref = truth[agent].preference
        if pref.rank_of(proposed) > pref.rank_of(current):
            return False
        if proposed != current:
            strict = strict or pref.prefers(proposed, current)
    return strict
