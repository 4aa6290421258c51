"""Parsing, serialization, bundled fixtures, and instance generators."""

from __future__ import annotations

import json

import pytest

from netswap import (
    MalformedJson,
    UnknownFixture,
    fixture_expectations,
    fixture_names,
    gen_complete,
    gen_line,
    gen_random,
    gen_tree,
    instance_to_jsonable,
    paper_fixture,
    parse_instance,
    qualified_set,
    build_reported_graph,
    serialize_instance,
)


def test_fixture_names_cover_the_bundled_markets():
    assert set(fixture_names()) == {"fig2", "fig3a", "fig4", "fig5", "fig6", "appendixA"}


def test_unknown_fixture_name_raises():
    with pytest.raises(UnknownFixture):
        paper_fixture("fig99")
    with pytest.raises(UnknownFixture):
        fixture_expectations("fig99")


def test_every_fixture_survives_a_serialize_parse_round_trip():
    for name in fixture_names():
        inst = paper_fixture(name)
        assert parse_instance(serialize_instance(inst)) == inst


def test_jsonable_form_uses_string_agent_keys():
    data = instance_to_jsonable(paper_fixture("fig2"))
    assert data["n"] == 3
    assert data["initial"] == [1, 2]
    assert set(data["profiles"]) == {"1", "2", "3"}
    assert data["profiles"]["1"]["pref"] == [3, 2, 1]
    assert data["profiles"]["1"]["neighbors"] == [2]
    assert data.get("truth") is None
    # Jsonable output is valid JSON input.
    assert parse_instance(json.dumps(data)) == paper_fixture("fig2")


def test_duplicate_json_keys_are_rejected():
    text = (
        '{"n": 2, "n": 2, "initial": [1], "profiles": {'
        '"1": {"pref": [1, 2], "neighbors": [2]}, '
        '"2": {"pref": [1, 2], "neighbors": [1]}}}'
    )
    with pytest.raises(MalformedJson):
        parse_instance(text)


def test_non_json_input_is_malformed():
    with pytest.raises(MalformedJson):
        parse_instance("not json at all")


def test_random_generator_is_seed_deterministic():
    a = gen_random(5, 0.5, "seed-a")
    b = gen_random(5, 0.5, "seed-a")
    assert a == b
    assert gen_random(5, 0.5, "seed-b") != a


def test_random_generator_reports_symmetric_edges():
    inst = gen_random(6, 0.6, 42)
    for i in range(1, 7):
        for j in inst.profiles[i].neighbors:
            assert i in inst.profiles[j].neighbors


def test_complete_generator_connects_everyone():
    inst = gen_complete(5)
    for i in range(1, 6):
        assert inst.profiles[i].neighbors == frozenset(range(1, 6)) - {i}
    assert qualified_set(build_reported_graph(inst), inst.initial) == frozenset(range(1, 6))


def test_line_generator_links_consecutive_agents_only():
    inst = gen_line(5)
    assert inst.profiles[1].neighbors == frozenset({2})
    assert inst.profiles[3].neighbors == frozenset({2, 4})
    assert inst.profiles[5].neighbors == frozenset({4})
    assert qualified_set(build_reported_graph(inst), inst.initial) == frozenset(range(1, 6))


def test_tree_generator_yields_a_connected_acyclic_network():
    inst = gen_tree(8, 3)
    edges = {
        frozenset((i, j))
        for i in range(1, 9)
        for j in inst.profiles[i].neighbors
    }
    assert len(edges) == 7
    for i in range(1, 9):
        for j in inst.profiles[i].neighbors:
            assert i in inst.profiles[j].neighbors
    # Connected: everyone is qualified once every agent is initial.
    full = inst
    seen = {1}
    frontier = [1]
    while frontier:
        node = frontier.pop()
        for other in full.profiles[node].neighbors:
            if other not in seen:
                seen.add(other)
                frontier.append(other)
    assert seen == set(range(1, 9))
    assert gen_tree(8, 3) == inst


def test_recorded_expectations_match_fixture_shapes():
    fig5 = fixture_expectations("fig5")
    assert fig5["ls_rounds"] == 2
    assert set(fig5["swn"]) == {1, 2, 3, 4}
    appendix = fixture_expectations("appendixA")
    assert appendix["ordering"] == [1, 2, 3, 4, 5, 6]
    assert len(appendix["ctc_cases"]) == 7
