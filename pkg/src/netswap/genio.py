"""Instance parsing, serialization, generators, and bundled fixtures.

The fixture catalog carries small markets with independently worked-out
expected outcomes (allocations, traces, witnesses) used by the golden tests.
"""

from __future__ import annotations

import json
import random
from enum import Enum

from .errors import MalformedJson, UnknownFixture
from .model import AgentType, Instance, Preference, validate_instance


class FixtureId(str, Enum):
    FIG2 = "fig2"
    FIG3A = "fig3a"
    FIG5 = "fig5"
    FIG6 = "fig6"
    FIG4 = "fig4"
    APPENDIX_A = "appendixA"


def _raw(n: int, initial: list[int], profiles: dict[int, tuple[list[int], list[int]]]) -> dict:
    return {
        "n": n,
        "initial": initial,
        "profiles": {
            str(i): {"pref": pref, "neighbors": nbrs} for i, (pref, nbrs) in profiles.items()
        },
    }


_FIXTURES: dict[str, dict] = {
    FixtureId.FIG2.value: _raw(
        3,
        [1, 2],
        {
            1: ([3, 2, 1], [2]),
            2: ([1, 2, 3], [1, 3]),
            3: ([1, 3, 2], [1, 2]),
        },
    ),
    FixtureId.FIG3A.value: _raw(
        4,
        [1, 2],
        {
            1: ([4, 2, 1, 3], [2, 3]),
            2: ([3, 2, 1, 4], [1, 4]),
            3: ([1, 3, 2, 4], [1, 2]),
            4: ([1, 4, 2, 3], [1, 2]),
        },
    ),
    FixtureId.FIG4.value: _raw(
        4,
        [1],
        {
            1: ([3, 2, 1, 4], [2]),
            2: ([4, 1, 2, 3], [1, 3]),
            3: ([1, 4, 3, 2], [2, 4]),
            4: ([2, 3, 4, 1], [3]),
        },
    ),
    FixtureId.FIG5.value: _raw(
        4,
        [2],
        {
            1: ([4, 1, 2, 3], [2]),
            2: ([3, 2, 1, 4], [1, 3]),
            3: ([2, 3, 1, 4], [2, 4]),
            4: ([1, 4, 2, 3], [3]),
        },
    ),
    FixtureId.FIG6.value: _raw(
        5,
        [1],
        {
            1: ([5, 2, 1, 3, 4], [2, 3]),
            2: ([3, 2, 1, 4, 5], [1, 4]),
            3: ([4, 1, 3, 2, 5], [1, 5]),
            4: ([1, 4, 2, 3, 5], [2]),
            5: ([3, 5, 1, 2, 4], [3]),
        },
    ),
    FixtureId.APPENDIX_A.value: _raw(
        6,
        [1],
        {
            1: ([5, 1, 2, 3, 4, 6], [2, 3, 4]),
            2: ([4, 1, 2, 3, 5, 6], [1]),
            3: ([1, 6, 3, 2, 4, 5], [1]),
            4: ([2, 4, 1, 3, 5, 6], [1, 3, 5, 6]),
            5: ([1, 3, 4, 5, 2, 6], [4]),
            6: ([3, 6, 1, 2, 4, 5], [4]),
        },
    ),
}

# Independently derived expected outcomes, keyed like the fixtures.
_EXPECTATIONS: dict[str, dict] = {
    FixtureId.FIG2.value: {
        "ttc": {1: 3, 2: 2, 3: 1},
        "ic_witness": {"agent": 2, "neighbors": [1], "baseline": 2, "gained": 1},
        "misreport_allocation": {1: 2, 2: 1, 3: 3},
    },
    FixtureId.FIG3A.value: {
        "optimal_wcc_ir": [
            {1: 4, 2: 2, 3: 3, 4: 1},
            {1: 2, 2: 3, 3: 1, 4: 4},
        ],
    },
    FixtureId.FIG4.value: {
        "swn": {1: 2, 2: 1, 3: 4, 4: 3},
        "ls": {1: 2, 2: 1, 3: 4, 4: 3},
        "ctc": {1: 2, 2: 4, 3: 1, 4: 3},
        "dominating": {1: 2, 2: 4, 3: 1, 4: 3},
        "improved": [2, 3],
    },
    FixtureId.FIG5.value: {
        "swn": {1: 1, 2: 3, 3: 2, 4: 4},
        "ls": {1: 4, 2: 3, 3: 2, 4: 1},
        "ttc": {1: 4, 2: 3, 3: 2, 4: 1},
        "ctc": {1: 1, 2: 3, 3: 2, 4: 4},
        "ls_rounds": 2,
    },
    FixtureId.FIG6.value: {
        "ctc": {1: 5, 2: 2, 3: 1, 4: 4, 5: 3},
        "pointing": {1: 5, 2: 3, 3: 4, 4: 1, 5: 3},
        "ctc_cases": ["c.v", "c.ii", "c.ii", "c.ii"],
    },
    FixtureId.APPENDIX_A.value: {
        "ctc": {1: 5, 2: 1, 3: 3, 4: 2, 5: 4, 6: 6},
        "pointing": {1: 5, 2: 4, 3: 1, 4: 2, 5: 1, 6: 3},
        "ordering": [1, 2, 3, 4, 5, 6],
        "ctc_cases": ["c.iv", "c.v", "c.iii", "c.ii", "c.i", "c.ii", "c.ii"],
        "step_S": {1: [2, 5], 2: [5]},
        "step_T": {3: [1, 2, 3, 4, 5]},
    },
}


def fixture_names() -> list[str]:
    return [f.value for f in FixtureId]


def paper_fixture(fixture: FixtureId | str) -> Instance:
    """A bundled example market by name."""
    key = fixture.value if isinstance(fixture, FixtureId) else fixture
    if key not in _FIXTURES:
        raise UnknownFixture(f"no fixture named {key!r}; known: {fixture_names()}")
    return validate_instance(_FIXTURES[key])


def fixture_expectations(fixture: FixtureId | str) -> dict:
    """Expected-outcome metadata bundled with a fixture."""
    key = fixture.value if isinstance(fixture, FixtureId) else fixture
    if key not in _EXPECTATIONS:
        raise UnknownFixture(f"no fixture named {key!r}; known: {fixture_names()}")
    return _EXPECTATIONS[key]


def _reject_duplicates(pairs: list[tuple[str, object]]) -> dict:
    out: dict = {}
    for key, value in pairs:
        if key in out:
            raise MalformedJson(f"duplicate key {key!r}")
        out[key] = value
    return out


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance from JSON text."""
    try:
        raw = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"invalid JSON: {exc}") from None
    return validate_instance(raw)


def instance_to_jsonable(instance: Instance) -> dict:
    def block(profiles: dict[int, AgentType]) -> dict:
        return {
            str(i): {
                "pref": list(profiles[i].preference.ranking),
                "neighbors": sorted(profiles[i].neighbors),
            }
            for i in range(1, instance.n + 1)
        }

    raw: dict = {
        "n": instance.n,
        "initial": sorted(instance.initial),
        "profiles": block(instance.profiles),
    }
    if instance.truth is not None:
        raw["truth"] = block(instance.truth)
    return raw


def serialize_instance(instance: Instance) -> str:
    """JSON text that parse_instance maps back to an equal Instance."""
    return json.dumps(instance_to_jsonable(instance), sort_keys=True, indent=2)


def _random_profiles(
    rng: random.Random, n: int, neighbor_sets: dict[int, set[int]]
) -> dict[int, AgentType]:
    profiles = {}
    for i in range(1, n + 1):
        ranking = list(range(1, n + 1))
        rng.shuffle(ranking)
        profiles[i] = AgentType(Preference(tuple(ranking)), frozenset(neighbor_sets[i]))
    return profiles


def _random_initial(rng: random.Random, n: int) -> frozenset[int]:
    bits = rng.randrange(1, 2**n)
    return frozenset(i for i in range(1, n + 1) if bits >> (i - 1) & 1)


def gen_random(n: int, edge_probability: float, seed) -> Instance:
    """Seeded market on a symmetric random network."""
    rng = random.Random(seed)
    neighbor_sets: dict[int, set[int]] = {i: set() for i in range(1, n + 1)}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if rng.random() < edge_probability:
                neighbor_sets[i].add(j)
                neighbor_sets[j].add(i)
    profiles = _random_profiles(rng, n, neighbor_sets)
    return Instance(n=n, initial=_random_initial(rng, n), profiles=profiles)


def gen_line(n: int) -> Instance:
    """Deterministic market on a mutual line 1-2-...-n with ascending preferences."""
    neighbor_sets = {
        i: {j for j in (i - 1, i + 1) if 1 <= j <= n} for i in range(1, n + 1)
    }
    profiles = {
        i: AgentType(Preference(tuple(range(1, n + 1))), frozenset(neighbor_sets[i]))
        for i in range(1, n + 1)
    }
    return Instance(n=n, initial=frozenset({1}), profiles=profiles)


def gen_complete(n: int) -> Instance:
    """Deterministic market on a complete network with ascending preferences."""
    everyone = set(range(1, n + 1))
    profiles = {
        i: AgentType(Preference(tuple(range(1, n + 1))), frozenset(everyone - {i}))
        for i in range(1, n + 1)
    }
    return Instance(n=n, initial=frozenset({1}), profiles=profiles)


def gen_tree(n: int, seed) -> Instance:
    """Seeded market on a random recursive tree (node k attaches to a random
    earlier node), with random preferences and initial set."""
    rng = random.Random(seed)
    neighbor_sets: dict[int, set[int]] = {i: set() for i in range(1, n + 1)}
    for k in range(2, n + 1):
        parent = rng.randrange(1, k)
        neighbor_sets[k].add(parent)
        neighbor_sets[parent].add(k)
    profiles = _random_profiles(rng, n, neighbor_sets)
    return Instance(n=n, initial=_random_initial(rng, n), profiles=profiles)
