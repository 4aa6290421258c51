"""House swaps on social networks: mechanisms, property checkers, and tooling.

Agents sit on a social network, each endowed with one house, and report a
preference ranking plus a set of neighbors. A mechanism reallocates houses
among the agents reachable from a designated initial set; everyone else keeps
their endowment. The verify layer brute-force checks incentive, efficiency,
and stability notions of the resulting allocations, with network-restricted
variants quantified over (weakly) complete components.
"""

from __future__ import annotations

from .errors import (
    CapExceeded,
    EmptyCandidateSet,
    EmptyInitialSet,
    InitialOutOfRange,
    MalformedJson,
    NeighborOutOfRange,
    NetswapError,
    NoLowerCandidate,
    NonPermutationPreference,
    ReportExceedsTruth,
    SelfNeighbor,
    UnknownFixture,
)
from .genio import (
    FixtureId,
    fixture_expectations,
    fixture_names,
    gen_complete,
    gen_line,
    gen_random,
    gen_tree,
    instance_to_jsonable,
    paper_fixture,
    parse_instance,
    serialize_instance,
)
from .mechanisms import run_ctc, run_ls, run_swn, run_ttc
from .model import (
    AgentId,
    AgentType,
    Allocation,
    Instance,
    Ordering,
    Preference,
    ReportedGraph,
    build_reported_graph,
    compute_ordering,
    favorite_in,
    qualified_set,
    validate_instance,
)
from .verify import (
    Caps,
    Property,
    PropertyReport,
    ScanReport,
    Witness,
    check_ic,
    check_ir,
    check_optimal_cc,
    check_optimal_wcc,
    check_po,
    check_stability,
    check_stable_cc,
    check_stable_wcc,
    enumerate_complete_components,
    enumerate_instances,
    enumerate_weakly_complete_components,
    exhaustive_scan,
    replay_coalition,
    replay_domination,
    replay_misreport,
    sample_instances,
)

__version__ = "0.1.0"

__all__ = [
    "AgentId",
    "AgentType",
    "Allocation",
    "CapExceeded",
    "Caps",
    "EmptyCandidateSet",
    "EmptyInitialSet",
    "FixtureId",
    "InitialOutOfRange",
    "Instance",
    "MalformedJson",
    "NeighborOutOfRange",
    "NetswapError",
    "NoLowerCandidate",
    "NonPermutationPreference",
    "Ordering",
    "Preference",
    "Property",
    "PropertyReport",
    "ReportExceedsTruth",
    "ReportedGraph",
    "ScanReport",
    "SelfNeighbor",
    "UnknownFixture",
    "Witness",
    "build_reported_graph",
    "check_ic",
    "check_ir",
    "check_optimal_cc",
    "check_optimal_wcc",
    "check_po",
    "check_stability",
    "check_stable_cc",
    "check_stable_wcc",
    "compute_ordering",
    "enumerate_complete_components",
    "enumerate_instances",
    "enumerate_weakly_complete_components",
    "exhaustive_scan",
    "favorite_in",
    "fixture_expectations",
    "fixture_names",
    "gen_complete",
    "gen_line",
    "gen_random",
    "gen_tree",
    "instance_to_jsonable",
    "paper_fixture",
    "parse_instance",
    "qualified_set",
    "replay_coalition",
    "replay_domination",
    "replay_misreport",
    "run_ctc",
    "run_ls",
    "run_swn",
    "run_ttc",
    "sample_instances",
    "serialize_instance",
    "validate_instance",
]
