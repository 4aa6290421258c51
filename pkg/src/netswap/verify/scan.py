"""Exhaustive and sampled scans of mechanisms against properties."""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator
from dataclasses import dataclass

from ..genio import instance_to_jsonable
from ..model import (
    AgentType,
    Allocation,
    Instance,
    Preference,
    build_reported_graph,
    qualified_set,
)
from .components import (
    check_optimal_cc,
    check_optimal_wcc,
    check_stable_cc,
    check_stable_wcc,
)
from .properties import check_ic, check_po, check_stability
from .report import Caps, Property, PropertyReport, Witness


@dataclass(frozen=True, slots=True)
class ScanReport:
    mechanism: str
    property: Property
    n_range: tuple[int, ...]
    mode: str  # "exhaustive" | "sampled"
    instances_checked: int
    violations: int
    first_witness: dict | None
    work: int

    def to_json(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "property": self.property.value,
            "n": list(self.n_range),
            "mode": self.mode,
            "instances_checked": self.instances_checked,
            "violations": self.violations,
            "first_witness": self.first_witness,
            "work": self.work,
        }


def _instance_signature(instance: Instance) -> tuple:
    prefs = tuple(instance.profiles[i].preference.ranking for i in range(1, instance.n + 1))
    neighbors = tuple(
        tuple(sorted(instance.profiles[i].neighbors)) for i in range(1, instance.n + 1)
    )
    return prefs, neighbors, tuple(sorted(instance.initial))


def _relabeled_signature(instance: Instance, relabel: dict[int, int]) -> tuple:
    n = instance.n
    prefs = [None] * n
    neighbors = [None] * n
    for i in range(1, n + 1):
        target = relabel[i]
        prefs[target - 1] = tuple(relabel[h] for h in instance.profiles[i].preference.ranking)
        neighbors[target - 1] = tuple(sorted(relabel[j] for j in instance.profiles[i].neighbors))
    return tuple(prefs), tuple(neighbors), tuple(sorted(relabel[a] for a in instance.initial))


def _is_canonical(instance: Instance) -> bool:
    base = _instance_signature(instance)
    agents = list(range(1, instance.n + 1))
    for perm in itertools.permutations(agents):
        relabel = dict(zip(agents, perm))
        if _relabeled_signature(instance, relabel) < base:
            return False
    return True


def enumerate_instances(n: int, dedup: bool = False) -> Iterator[Instance]:
    """Every labeled instance of size n with a symmetric reported network.

    The space covers all unordered-pair edge subsets (reported mutually), all
    preference profiles, and all nonempty initial sets. With dedup=True only
    the canonical representative of each relabeling orbit is yielded.
    """
    agents = list(range(1, n + 1))
    pairs = list(itertools.combinations(agents, 2))
    rankings = list(itertools.permutations(agents))
    for edge_bits in range(2 ** len(pairs)):
        neighbor_sets: dict[int, set[int]] = {i: set() for i in agents}
        for bit, (i, j) in enumerate(pairs):
            if edge_bits >> bit & 1:
                neighbor_sets[i].add(j)
                neighbor_sets[j].add(i)
        frozen = {i: frozenset(neighbor_sets[i]) for i in agents}
        for pref_profile in itertools.product(rankings, repeat=n):
            profiles = {
                i: AgentType(Preference(pref_profile[i - 1]), frozen[i]) for i in agents
            }
            for initial_bits in range(1, 2**n):
                initial = frozenset(
                    i for i in agents if initial_bits >> (i - 1) & 1
                )
                instance = Instance(n=n, initial=initial, profiles=profiles)
                if dedup and not _is_canonical(instance):
                    continue
                yield instance


def sample_instances(n: int, count: int, seed) -> Iterator[Instance]:
    """Seeded random instances: symmetric network with a random edge density,
    uniform preference profile, and a random nonempty initial set."""
    rng = random.Random(f"{seed}:{n}")
    agents = list(range(1, n + 1))
    pairs = list(itertools.combinations(agents, 2))
    for _ in range(count):
        density = rng.random()
        neighbor_sets: dict[int, set[int]] = {i: set() for i in agents}
        for i, j in pairs:
            if rng.random() < density:
                neighbor_sets[i].add(j)
                neighbor_sets[j].add(i)
        profiles = {}
        for i in agents:
            ranking = agents[:]
            rng.shuffle(ranking)
            profiles[i] = AgentType(Preference(tuple(ranking)), frozenset(neighbor_sets[i]))
        initial_bits = rng.randrange(1, 2**n)
        initial = frozenset(i for i in agents if initial_bits >> (i - 1) & 1)
        yield Instance(n=n, initial=initial, profiles=profiles)


def _scan_ir(mechanism, instance: Instance) -> PropertyReport:
    # Inside a scan the instance space itself ranges over all report profiles,
    # so per instance only the truthful reading needs checking.
    allocation = mechanism(instance)
    truth = instance.effective_truth()
    for agent in range(1, instance.n + 1):
        pref = truth[agent].preference
        got = allocation.assignment[agent]
        if pref.rank_of(got) > pref.rank_of(agent):
            witness = Witness(
                kind="misreport",
                payload={"agent": agent, "house": got, "endowment": agent, "reports": {}},
            )
            return PropertyReport(Property.IR, "violated", witness, 1)
    return PropertyReport(Property.IR, "holds", None, 1)


def _check_instance(
    mechanism, prop: Property, instance: Instance, caps: Caps
) -> PropertyReport:
    if prop is Property.IR:
        return _scan_ir(mechanism, instance)
    if prop is Property.IC:
        return check_ic(mechanism, instance, caps)
    allocation: Allocation = mechanism(instance)
    checker = {
        Property.PO: check_po,
        Property.STABILITY: check_stability,
        Property.STABLE_CC: check_stable_cc,
        Property.OPTIMAL_CC: check_optimal_cc,
        Property.STABLE_WCC: check_stable_wcc,
        Property.OPTIMAL_WCC: check_optimal_wcc,
    }[prop]
    return checker(allocation, instance, caps)


def exhaustive_scan(
    mechanism,
    prop: Property,
    n_range: tuple[int, ...] | range | list[int],
    caps: Caps | None = None,
    seed=None,
    *,
    samples: int | None = None,
    dedup: bool = False,
    stop_after_first: bool = False,
) -> ScanReport:
    """Check one property of one mechanism over a space of instances.

    Without `samples`, the full labeled space of each size is enumerated
    (optionally deduplicated up to relabeling). With `samples`, that many
    seeded random instances per size are drawn instead.
    """
    caps = caps or Caps()
    prop = Property(prop)
    sizes = tuple(n_range)
    instances_checked = 0
    violations = 0
    first_witness: dict | None = None
    work = 0
    done = False
    for n in sizes:
        if done:
            break
        source = (
            sample_instances(n, samples, seed)
            if samples is not None
            else enumerate_instances(n, dedup)
        )
        for instance in source:
            instances_checked += 1
            report = _check_instance(mechanism, prop, instance, caps)
            work += report.work
            if not report.holds():
                violations += 1
                if first_witness is None:
                    first_witness = {
                        "n": n,
                        "instance": instance_to_jsonable(instance),
                        "witness": report.witness.to_json() if report.witness else None,
                    }
                if stop_after_first:
                    done = True
                    break
    name = getattr(mechanism, "__name__", str(mechanism))
    return ScanReport(
        mechanism=name,
        property=prop,
        n_range=sizes,
        mode="sampled" if samples is not None else "exhaustive",
        instances_checked=instances_checked,
        violations=violations,
        first_witness=first_witness,
        work=work,
    )


def qualified_of(instance: Instance):
    """Convenience wrapper used by scan consumers and tests."""
    return qualified_set(build_reported_graph(instance), instance.initial)
