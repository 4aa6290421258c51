"""Exit codes and JSON output of the netswap command line."""

from __future__ import annotations

import json

import pytest

from netswap import gen_complete, paper_fixture, parse_instance, serialize_instance
from netswap.cli import (
    EXIT_CAPS,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_VIOLATION,
    SEED_ENV,
    main,
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_run_prints_the_allocation_as_json(capsys):
    code, out, err = run_cli(capsys, "run", "--mechanism", "ttc", "--fixture", "fig2")
    assert code == EXIT_OK
    assert err == ""
    assert json.loads(out) == {"allocation": {"1": 3, "2": 2, "3": 1}}


def test_pretty_output_parses_to_the_same_payload(capsys):
    _, plain, _ = run_cli(capsys, "run", "--mechanism", "ctc", "--fixture", "fig6")
    _, pretty, _ = run_cli(capsys, "run", "--mechanism", "ctc", "--fixture", "fig6", "--pretty")
    assert json.loads(plain) == json.loads(pretty)
    assert plain != pretty


def test_trace_emits_one_event_per_line_before_the_allocation(capsys):
    code, out, _ = run_cli(capsys, "run", "--mechanism", "ctc", "--fixture", "appendixA", "--trace")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) > 1
    for line in lines[:-1]:
        event = json.loads(line)
        assert event["event"] in ("switch", "settle")
    assert "allocation" in json.loads(lines[-1])


def test_run_reads_instance_files(tmp_path, capsys):
    path = tmp_path / "market.json"
    path.write_text(serialize_instance(gen_complete(3)), encoding="utf-8")
    code, out, _ = run_cli(capsys, "run", "--mechanism", "swn", "--instance", str(path))
    assert code == EXIT_OK
    assert set(json.loads(out)["allocation"]) == {"1", "2", "3"}


def test_missing_instance_file_is_an_input_error(capsys):
    code, _, err = run_cli(capsys, "run", "--mechanism", "ttc", "--instance", "/no/such/file")
    assert code == EXIT_INPUT
    assert "error" in err


def test_malformed_instance_file_is_an_input_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 2}', encoding="utf-8")
    code, _, err = run_cli(capsys, "run", "--mechanism", "ttc", "--instance", str(path))
    assert code == EXIT_INPUT
    assert "error" in err


def test_large_cycle_markets_need_force(tmp_path, capsys):
    path = tmp_path / "big.json"
    path.write_text(serialize_instance(gen_complete(15)), encoding="utf-8")
    code, _, err = run_cli(capsys, "run", "--mechanism", "ctc", "--instance", str(path))
    assert code == EXIT_INPUT
    assert "size guard" in err
    code, out, _ = run_cli(
        capsys, "run", "--mechanism", "ctc", "--instance", str(path), "--force"
    )
    assert code == EXIT_OK
    assert len(json.loads(out)["allocation"]) == 15


def test_verify_reports_holds_with_a_clean_exit(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify",
        "--mechanism",
        "ctc",
        "--fixture",
        "fig4",
        "--properties",
        "ir,stable-cc,optimal-cc",
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["mechanism"] == "ctc"
    assert [r["verdict"] for r in payload["reports"]] == ["holds"] * 3


def test_verify_flags_violations_with_exit_one(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--mechanism", "swn", "--fixture", "fig4", "--properties", "optimal-cc"
    )
    assert code == EXIT_VIOLATION
    report = json.loads(out)["reports"][0]
    assert report["verdict"] == "violated"
    assert report["witness"]["kind"] == "domination"

    code, out, _ = run_cli(
        capsys, "verify", "--mechanism", "ttc", "--fixture", "fig2", "--properties", "ic"
    )
    assert code == EXIT_VIOLATION
    assert json.loads(out)["reports"][0]["witness"]["agent"] == 2


def test_unknown_property_is_an_input_error(capsys):
    code, _, err = run_cli(
        capsys, "verify", "--mechanism", "ttc", "--fixture", "fig2", "--properties", "shiny"
    )
    assert code == EXIT_INPUT
    assert "error" in err


def test_caps_overrides_validate_their_keys(capsys):
    code, _, err = run_cli(
        capsys,
        "verify", "--mechanism", "ttc", "--fixture", "fig2",
        "--properties", "ic", "--caps", "bogus=1",
    )
    assert code == EXIT_INPUT
    code, _, err = run_cli(
        capsys,
        "verify", "--mechanism", "ttc", "--fixture", "fig2",
        "--properties", "ic", "--caps", "enumerate_neighbors=maybe",
    )
    assert code == EXIT_INPUT


def test_exceeding_a_cap_exits_with_the_caps_code(capsys):
    code, _, err = run_cli(
        capsys,
        "verify", "--mechanism", "ttc", "--fixture", "fig4",
        "--properties", "ic", "--caps", "max_n=3",
    )
    assert code == EXIT_CAPS
    assert "error" in err


def test_sampled_scans_require_a_seed(capsys, monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)
    code, _, err = run_cli(
        capsys, "scan", "--mechanism", "swn", "--property", "ir", "--n", "3", "--samples", "20"
    )
    assert code == EXIT_INPUT
    assert "seed" in err


def test_the_seed_environment_variable_unlocks_sampling(capsys, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "7")
    code, out, _ = run_cli(
        capsys, "scan", "--mechanism", "swn", "--property", "ir", "--n", "3", "--samples", "20"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["mode"] == "sampled"
    assert payload["instances_checked"] == 20
    assert payload["violations"] == 0

    monkeypatch.setenv(SEED_ENV, "not-a-seed")
    code, _, err = run_cli(
        capsys, "scan", "--mechanism", "swn", "--property", "ir", "--n", "3", "--samples", "20"
    )
    assert code == EXIT_INPUT


def test_exhaustive_scans_stop_early_on_request(capsys):
    code, out, _ = run_cli(
        capsys,
        "scan", "--mechanism", "ttc", "--property", "ic", "--n", "3", "--stop-after-first",
    )
    assert code == EXIT_VIOLATION
    payload = json.loads(out)
    assert payload["mode"] == "exhaustive"
    assert payload["violations"] == 1
    assert payload["first_witness"]["n"] == 3


def test_fixtures_lists_names_by_default(capsys):
    code, out, _ = run_cli(capsys, "fixtures")
    assert code == EXIT_OK
    assert set(out.split()) >= {"fig2", "fig4", "appendixA"}


def test_fixtures_prints_a_named_market(capsys):
    code, out, _ = run_cli(capsys, "fixtures", "--name", "fig2")
    assert code == EXIT_OK
    assert parse_instance(out) == paper_fixture("fig2")


def test_fixtures_exports_every_market(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "fixtures", "--export", str(tmp_path))
    assert code == EXIT_OK
    paths = out.split()
    assert len(paths) == 6
    names = set()
    for line in paths:
        with open(line, encoding="utf-8") as handle:
            parse_instance(handle.read())
        names.add(line.rsplit("/", 1)[-1])
    assert "fig2.json" in names


def test_bench_times_a_single_size(capsys):
    code, out, _ = run_cli(capsys, "bench", "--mechanism", "ttc", "--n", "30")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["mechanism"] == "ttc"
    assert payload["results"][0]["n"] == 30
    assert payload["results"][0]["seconds"] >= 0


def test_bench_guards_oversized_cycle_ladders(capsys):
    code, _, err = run_cli(capsys, "bench", "--mechanism", "ctc", "--n", "20")
    assert code == EXIT_INPUT
    assert "size guard" in err


def test_unknown_mechanism_is_rejected_by_the_parser(capsys):
    with pytest.raises(SystemExit):
        main(["run", "--mechanism", "rsd", "--fixture", "fig2"])
