"""Command line front end.

Verbs: run a mechanism on an instance, verify properties of its outcome,
scan an instance space for violations, list or export bundled fixtures,
and benchmark mechanism runtimes.

Exit codes: 0 success / all properties hold, 1 at least one violation,
2 input or usage error, 3 an enumeration cap was exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from pathlib import Path

from .errors import CapExceeded, NetswapError
from .genio import fixture_names, gen_random, paper_fixture, parse_instance, serialize_instance
from .mechanisms import run_ctc, run_ls, run_swn, run_ttc
from .model import Instance
from .verify import (
    Caps,
    Property,
    check_ic,
    check_ir,
    check_optimal_cc,
    check_optimal_wcc,
    check_po,
    check_stability,
    check_stable_cc,
    check_stable_wcc,
    exhaustive_scan,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_CAPS = 3

SEED_ENV = "NETSWAP_SEED"

# Component search is worst-case exponential in n; refuse big runs by default.
CTC_SIZE_GUARD = 14

MECHANISM_NAMES = ("ttc", "swn", "ls", "ctc")

_ALLOCATION_CHECKERS = {
    Property.PO: check_po,
    Property.STABILITY: check_stability,
    Property.STABLE_CC: check_stable_cc,
    Property.OPTIMAL_CC: check_optimal_cc,
    Property.STABLE_WCC: check_stable_wcc,
    Property.OPTIMAL_WCC: check_optimal_wcc,
}

_BENCH_SIZES = {
    "ttc": (25, 50, 100, 200),
    "swn": (25, 50, 100, 200),
    "ls": (25, 50, 100, 200),
    "ctc": (4, 6, 8, 10),
}


class _InputError(NetswapError):
    """Command line level input problem (bad seed env value, etc.)."""


def _mechanism_runner(name: str, seed: int | None):
    """A mechanism callable with a stable short __name__ for reports."""
    if name == "ttc":
        def runner(instance: Instance, trace=None):
            return run_ttc(instance, trace=trace)
    elif name == "swn":
        def runner(instance: Instance, trace=None):
            return run_swn(instance, trace=trace)
    elif name == "ls":
        def runner(instance: Instance, trace=None):
            return run_ls(instance, seed, trace=trace)
    else:
        def runner(instance: Instance, trace=None):
            return run_ctc(instance, seed, trace=trace)
    runner.__name__ = name
    return runner


def _resolve_seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return None
    try:
        return int(env)
    except ValueError:
        raise _InputError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _load_instance(args) -> Instance:
    if args.fixture is not None:
        return paper_fixture(args.fixture)
    return parse_instance(Path(args.instance).read_text(encoding="utf-8"))


def _dumps(payload: dict, pretty: bool) -> str:
    if pretty:
        return json.dumps(payload, sort_keys=True, indent=2)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _parse_caps(entries: list[str] | None) -> Caps:
    caps = Caps()
    if not entries:
        return caps
    fields = {f.name: f.type for f in dataclasses.fields(Caps)}
    overrides: dict[str, object] = {}
    for entry in entries:
        key, sep, value = entry.partition("=")
        if not sep or key not in fields:
            raise _InputError(f"bad cap {entry!r}; expected one of {sorted(fields)} as key=value")
        if key == "enumerate_neighbors":
            if value not in ("true", "false"):
                raise _InputError(f"cap {key} takes true or false, got {value!r}")
            overrides[key] = value == "true"
        else:
            try:
                overrides[key] = int(value)
            except ValueError:
                raise _InputError(f"cap {key} takes an integer, got {value!r}") from None
    return dataclasses.replace(caps, **overrides)


def _cmd_run(args) -> int:
    instance = _load_instance(args)
    seed = _resolve_seed(args)
    if args.mechanism == "ctc" and instance.n > CTC_SIZE_GUARD and not args.force:
        print(
            f"error: ctc on n={instance.n} exceeds the size guard ({CTC_SIZE_GUARD});"
            " pass --force to run anyway",
            file=sys.stderr,
        )
        return EXIT_INPUT
    trace: list[dict] | None = [] if args.trace else None
    allocation = _mechanism_runner(args.mechanism, seed)(instance, trace=trace)
    if trace is not None:
        for event in trace:
            print(json.dumps(event, sort_keys=True, separators=(",", ":")))
    payload = {"allocation": {str(i): h for i, h in allocation.assignment.items()}}
    print(_dumps(payload, args.pretty))
    return EXIT_OK


def _cmd_verify(args) -> int:
    instance = _load_instance(args)
    seed = _resolve_seed(args)
    caps = _parse_caps(args.caps)
    try:
        props = [Property(token) for token in args.properties.split(",") if token]
    except ValueError as exc:
        raise _InputError(str(exc)) from None
    runner = _mechanism_runner(args.mechanism, seed)
    allocation = None
    reports = []
    for prop in props:
        if prop is Property.IR:
            reports.append(check_ir(runner, instance, caps))
        elif prop is Property.IC:
            reports.append(check_ic(runner, instance, caps))
        else:
            if allocation is None:
                allocation = runner(instance)
            reports.append(_ALLOCATION_CHECKERS[prop](allocation, instance, caps))
    payload = {
        "mechanism": args.mechanism,
        "reports": [report.to_json() for report in reports],
    }
    print(_dumps(payload, args.pretty))
    return EXIT_OK if all(report.holds() for report in reports) else EXIT_VIOLATION


def _cmd_scan(args) -> int:
    seed = _resolve_seed(args)
    caps = _parse_caps(args.caps)
    if args.samples is not None and seed is None:
        raise _InputError("sampled scans need --seed (or the seed environment variable)")
    runner = _mechanism_runner(args.mechanism, seed)
    report = exhaustive_scan(
        runner,
        Property(args.property),
        (args.n,),
        caps,
        seed,
        samples=args.samples,
        dedup=args.dedup,
        stop_after_first=args.stop_after_first,
    )
    print(_dumps(report.to_json(), args.pretty))
    return EXIT_VIOLATION if report.violations else EXIT_OK


def _cmd_fixtures(args) -> int:
    if args.name is not None:
        print(serialize_instance(paper_fixture(args.name)))
        return EXIT_OK
    if args.export is not None:
        target = Path(args.export)
        target.mkdir(parents=True, exist_ok=True)
        for name in fixture_names():
            path = target / f"{name}.json"
            path.write_text(serialize_instance(paper_fixture(name)) + "\n", encoding="utf-8")
            print(path)
        return EXIT_OK
    for name in fixture_names():
        print(name)
    return EXIT_OK


def _cmd_bench(args) -> int:
    seed = _resolve_seed(args) or 0
    sizes = (args.n,) if args.n is not None else _BENCH_SIZES[args.mechanism]
    if args.mechanism == "ctc" and not args.force:
        oversized = [n for n in sizes if n > CTC_SIZE_GUARD]
        if oversized:
            print(
                f"error: ctc bench sizes {oversized} exceed the size guard"
                f" ({CTC_SIZE_GUARD}); pass --force to run anyway",
                file=sys.stderr,
            )
            return EXIT_INPUT
    runner = _mechanism_runner(args.mechanism, seed)
    results = []
    for n in sizes:
        instance = gen_random(n, 0.5, f"bench:{seed}:{n}")
        started = time.perf_counter()
        runner(instance)
        elapsed = time.perf_counter() - started
        results.append({"n": n, "seconds": round(elapsed, 6)})
    print(_dumps({"mechanism": args.mechanism, "results": results}, args.pretty))
    return EXIT_OK


def _add_source(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--instance", help="path to an instance JSON file")
    group.add_argument("--fixture", choices=fixture_names(), help="bundled example name")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"tie-break seed for ls/ctc (falls back to ${SEED_ENV})",
    )
    parser.add_argument("--pretty", action="store_true", help="indent JSON output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netswap",
        description="House swaps on social networks: mechanisms and property checkers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a mechanism and print the allocation")
    p_run.add_argument("--mechanism", required=True, choices=MECHANISM_NAMES)
    _add_source(p_run)
    _add_common(p_run)
    p_run.add_argument("--trace", action="store_true", help="print one JSON event per line")
    p_run.add_argument("--force", action="store_true", help="lift the ctc size guard")

    p_verify = sub.add_parser("verify", help="check properties of a mechanism on an instance")
    p_verify.add_argument("--mechanism", required=True, choices=MECHANISM_NAMES)
    _add_source(p_verify)
    _add_common(p_verify)
    p_verify.add_argument(
        "--properties",
        default=",".join(prop.value for prop in Property),
        help="comma separated property names (default: all)",
    )
    p_verify.add_argument(
        "--caps",
        action="append",
        metavar="KEY=VALUE",
        help="override an enumeration cap (repeatable)",
    )

    p_scan = sub.add_parser("scan", help="check one property over an instance space")
    p_scan.add_argument("--mechanism", required=True, choices=MECHANISM_NAMES)
    p_scan.add_argument("--property", required=True, choices=[p.value for p in Property])
    p_scan.add_argument("--n", required=True, type=int, help="market size to scan")
    mode = p_scan.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="enumerate the full space (default)")
    mode.add_argument("--samples", type=int, default=None, help="draw this many seeded instances")
    _add_common(p_scan)
    p_scan.add_argument("--dedup", action="store_true", help="skip relabelings of seen instances")
    p_scan.add_argument("--stop-after-first", action="store_true", help="stop at the first violation")
    p_scan.add_argument("--caps", action="append", metavar="KEY=VALUE", help="override a cap")

    p_fixtures = sub.add_parser("fixtures", help="list or export the bundled examples")
    p_fixtures.add_argument("--name", choices=fixture_names(), help="print one fixture as JSON")
    p_fixtures.add_argument("--export", metavar="DIR", help="write every fixture to DIR")

    p_bench = sub.add_parser("bench", help="time a mechanism on seeded random markets")
    p_bench.add_argument("--mechanism", required=True, choices=MECHANISM_NAMES)
    p_bench.add_argument("--n", type=int, default=None, help="single size instead of the ladder")
    _add_common(p_bench)
    p_bench.add_argument("--force", action="store_true", help="lift the ctc size guard")

    return parser


_COMMANDS = {
    "run": _cmd_run,
    "verify": _cmd_verify,
    "scan": _cmd_scan,
    "fixtures": _cmd_fixtures,
    "bench": _cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPS
    except (NetswapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
