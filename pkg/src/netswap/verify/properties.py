"""Individual rationality, incentive, efficiency and stability checkers.

All checkers are brute force by design: they enumerate the quantifier in the
property definition directly and return a replayable witness on violation.
Preference comparisons always use true preferences; mechanisms only ever see
reported profiles.
"""

from __future__ import annotations

import itertools
from math import factorial

from ..errors import CapExceeded
from ..model import (
    AgentId,
    AgentType,
    Allocation,
    Instance,
    Preference,
    build_reported_graph,
    qualified_set,
)
from .report import Caps, Property, PropertyReport, Witness


def _qualified(instance: Instance) -> frozenset[AgentId]:
    return qualified_set(build_reported_graph(instance), instance.initial)


def _holds(prop: Property, work: int) -> PropertyReport:
    return PropertyReport(property=prop, verdict="holds", witness=None, work=work)


def _violated(prop: Property, witness: Witness, work: int) -> PropertyReport:
    return PropertyReport(property=prop, verdict="violated", witness=witness, work=work)


def check_ir(mechanism, instance: Instance, caps: Caps | None = None) -> PropertyReport:
    """No truthful agent may end up below her endowment.

    The truthful profile is always checked. For small markets the quantifier
    over the other agents' reports is enumerated as well: every other agent
    independently reports any subset of her true neighbors.
    """
    caps = caps or Caps()
    truth = instance.effective_truth()
    truthful = Instance(instance.n, instance.initial, dict(truth), truth)
    work = 1
    allocation = mechanism(truthful)
    for agent in range(1, instance.n + 1):
        pref = truth[agent].preference
        got = allocation.assignment[agent]
        if pref.rank_of(got) > pref.rank_of(agent):
            witness = Witness(
                kind="misreport",
                payload={"agent": agent, "house": got, "endowment": agent, "reports": {}},
            )
            return _violated(Property.IR, witness, work)
    if instance.n > caps.ir_enumeration_n:
        return _holds(Property.IR, work)
    agents = list(range(1, instance.n + 1))
    for agent in agents:
        others = [j for j in agents if j != agent]
        subset_space = [
            [frozenset(c) for size in range(len(truth[j].neighbors), -1, -1)
             for c in itertools.combinations(sorted(truth[j].neighbors), size)]
            for j in others
        ]
        pref = truth[agent].preference
        own_rank = pref.rank_of(agent)
        for combo in itertools.product(*subset_space):
            profiles = dict(truth)
            for j, reported in zip(others, combo):
                profiles[j] = AgentType(truth[j].preference, reported)
            work += 1
            got = mechanism(Instance(instance.n, instance.initial, profiles, truth)).assignment[agent]
            if pref.rank_of(got) > own_rank:
                reports = {
                    str(j): {
                        "pref": list(truth[j].preference.ranking),
                        "neighbors": sorted(reported),
                    }
                    for j, reported in zip(others, combo)
                }
                witness = Witness(
                    kind="misreport",
                    payload={"agent": agent, "house": got, "endowment": agent, "reports": reports},
                )
                return _violated(Property.IR, witness, work)
    return _holds(Property.IR, work)


def check_ic(mechanism, instance: Instance, caps: Caps | None = None) -> PropertyReport:
    """Truthful reporting must be a dominant strategy against the given reports.

    For every agent: fix everyone else at their reported types, compare her
    truthful outcome with every deviation (all preference permutations crossed
    with all subsets of her true neighbor set) under her true preference.
    """
    caps = caps or Caps()
    if instance.n > caps.max_n:
        raise CapExceeded(f"incentive check capped at n <= {caps.max_n}, got {instance.n}")
    if factorial(instance.n) > caps.max_pref_perms:
        raise CapExceeded(
            f"{instance.n}! preference reports exceed the cap of {caps.max_pref_perms}"
        )
    truth = instance.effective_truth()
    work = 0
    shared_baseline = None
    if instance.profiles == truth:
        shared_baseline = mechanism(instance)
        work += 1
    # An agent's own report never affects her own reachability (only edges out
    # of already-reached agents are followed), so the unqualified keep their
    # endowments under every deviation and need no enumeration.
    qualified = qualified_set(build_reported_graph(instance), instance.initial)
    house_ids = list(range(1, instance.n + 1))
    for agent in range(1, instance.n + 1):
        if agent not in qualified:
            continue
        true_pref = truth[agent].preference
        if shared_baseline is not None:
            baseline = shared_baseline
        else:
            profiles = dict(instance.profiles)
            profiles[agent] = truth[agent]
            baseline = mechanism(Instance(instance.n, instance.initial, profiles, truth))
            work += 1
        base_house = baseline.assignment[agent]
        if base_house == true_pref.ranking[0]:
            continue  # already gets her true favorite; no deviation can gain
        base_rank = true_pref.rank_of(base_house)
        true_neighbors = truth[agent].neighbors
        if caps.enumerate_neighbors:
            subsets = sorted(
                (frozenset(c)
                 for size in range(len(true_neighbors) + 1)
                 for c in itertools.combinations(sorted(true_neighbors), size)),
                key=lambda s: (-len(s), tuple(sorted(s))),
            )
        else:
            subsets = [true_neighbors]
        true_ranking = truth[agent].preference.ranking
        rankings = [true_ranking] + sorted(
            p for p in itertools.permutations(house_ids) if p != true_ranking
        )
        for reported_neighbors in subsets:
            for ranking in rankings:
                if reported_neighbors == true_neighbors and ranking == true_ranking:
                    continue
                profiles = dict(instance.profiles)
                profiles[agent] = AgentType(Preference(ranking), reported_neighbors)
                work += 1
                deviated = mechanism(Instance(instance.n, instance.initial, profiles, truth))
                got = deviated.assignment[agent]
                if true_pref.rank_of(got) < base_rank:
                    witness = Witness(
                        kind="misreport",
                        payload={
                            "agent": agent,
                            "pref": list(ranking),
                            "neighbors": sorted(reported_neighbors),
                            "baseline": base_house,
                            "gained": got,
                        },
                    )
                    return _violated(Property.IC, witness, work)
    return _holds(Property.IC, work)


def check_po(allocation: Allocation, instance: Instance, caps: Caps | None = None) -> PropertyReport:
    """No reallocation among the qualified agents may dominate the allocation."""
    caps = caps or Caps()
    if instance.n > caps.allocation_max_n:
        raise CapExceeded(f"efficiency check capped at n <= {caps.allocation_max_n}")
    truth = instance.effective_truth()
    qualified = sorted(_qualified(instance))
    ranks = {i: {h: k for k, h in enumerate(truth[i].preference.ranking)} for i in qualified}
    current = [allocation.assignment[i] for i in qualified]
    work = 0
    for alternative in itertools.permutations(current):
        work += 1
        strict = False
        for agent, now, then in zip(qualified, current, alternative):
            r = ranks[agent]
            if r[then] > r[now]:
                break
            strict = strict or r[then] < r[now]
        else:
            if strict:
                full = dict(allocation.assignment)
                improved = []
                for agent, now, then in zip(qualified, current, alternative):
                    full[agent] = then
                    if then != now:
                        improved.append(agent)
                witness = Witness(
                    kind="domination",
                    payload={"alternative": full, "improved": improved},
                )
                return _violated(Property.PO, witness, work)
    return _holds(Property.PO, work)


def check_stability(
    allocation: Allocation, instance: Instance, caps: Caps | None = None
) -> PropertyReport:
    """No coalition of qualified agents may block with its own endowments."""
    caps = caps or Caps()
    if instance.n > caps.allocation_max_n:
        raise CapExceeded(f"stability check capped at n <= {caps.allocation_max_n}")
    truth = instance.effective_truth()
    qualified = sorted(_qualified(instance))
    ranks = {i: {h: k for k, h in enumerate(truth[i].preference.ranking)} for i in qualified}
    work = 0
    for size in range(1, len(qualified) + 1):
        for coalition in itertools.combinations(qualified, size):
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
                        return _violated(Property.STABILITY, witness, work)
    return _holds(Property.STABILITY, work)
