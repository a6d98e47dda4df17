"""Command-line front end.

Subcommands::

    lzg check MODEL TARGET     decide reachability of a control state
    lzg explore MODEL          build the full graph, optionally as DOT
    lzg gen                    emit benchmark family models
    lzg oracle                 run the independent cross-check suites
    lzg bench                  run the benchmark suite with both engines

Exit codes form the stable machine interface: 0 means success (for
``check``: target unreachable), 10 means the target is reachable, 2 is a
usage or input problem, and 3 an internal abort.  The ``LZG_LOG``
environment variable (``error``, ``info`` or ``debug``) turns on
diagnostics on stderr; stdout carries only results.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path
from random import Random
from typing import Optional, Sequence

from . import bench as bench_mod
from . import oracle
from .dbm import OverflowAbort
from .explore import explore_global, explore_local, render_dot
from .model import Network, ParseError, parse_network, parse_target

EXIT_OK = 0
EXIT_REACHABLE = 10
EXIT_USAGE = 2
EXIT_ABORT = 3

log = logging.getLogger("lzg")

_ENGINES = {"global": explore_global, "local": explore_local}


class _UsageError(Exception):
    """Input problem: reported on stderr, exit code 2."""


def _configure_logging() -> None:
    log.handlers.clear()
    log.setLevel(logging.WARNING)
    raw = os.environ.get("LZG_LOG")
    if not raw:
        return
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    level = levels.get(raw.strip().lower())
    if level is None:
        print(
            f"lzg: ignoring LZG_LOG={raw!r} (expected error, info or debug)",
            file=sys.stderr,
        )
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("lzg %(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(level)


def _load_net(path: str) -> Network:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read model {path!r}: {exc}") from exc
    try:
        net = parse_network(text, path)
    except ParseError as exc:
        raise _UsageError(f"{path}: {exc}") from exc
    log.info(
        "parsed %s: %d processes, %d clocks, %d actions",
        net.name, len(net.processes), len(net.clocks), len(net.actions),
    )
    return net


def _parse_sizes(text: str) -> list[int]:
    m = re.fullmatch(r"(\d+)(?:\.\.(\d+))?", text)
    if not m:
        raise _UsageError(f"bad size range {text!r}: expected N or A..B")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo < 1 or hi < lo:
        raise _UsageError(f"bad size range {text!r}: need 1 <= A <= B")
    return list(range(lo, hi + 1))


def _write_text(path: str, text: str, what: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise _UsageError(f"cannot write {what} {path!r}: {exc}") from exc


def _dump_stats(path: Optional[str], payload: dict) -> None:
    if path is None:
        return
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n", "stats")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check(args: argparse.Namespace) -> int:
    net = _load_net(args.model)
    try:
        target = parse_target(net, args.target)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    result = _ENGINES[args.algorithm](net, target)
    stats = result.stats()
    _dump_stats(args.stats_json, {"model": net.name, "target": args.target, **stats})
    if result.found:
        word = " ".join(result.witness) if result.witness else "<initial state>"
        print(f"reachable: {word}")
    else:
        print("unreachable")
    print(
        f"{stats['algorithm']}: visited {stats['visited']} "
        f"stored {stats['stored']} covered {stats['covered']} "
        f"in {stats['seconds']:.3f}s"
    )
    return EXIT_REACHABLE if result.found else EXIT_OK


def _cmd_explore(args: argparse.Namespace) -> int:
    net = _load_net(args.model)
    result = _ENGINES[args.algorithm](net, exhaustive=args.exhaustive)
    stats = result.stats()
    _dump_stats(args.stats_json, {"model": net.name, **stats})
    if args.dot is not None:
        _write_text(args.dot, render_dot(result), "DOT file")
        log.info("wrote %s", args.dot)
    print(
        f"{stats['algorithm']}: visited {stats['visited']} "
        f"stored {stats['stored']} covered {stats['covered']} "
        f"in {stats['seconds']:.3f}s"
    )
    return EXIT_OK


def _cmd_gen(args: argparse.Namespace) -> int:
    sizes = _parse_sizes(args.sizes)
    try:
        texts = [(n, bench_mod.model_source(args.family, n)) for n in sizes]
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if args.out is None:
        for _, text in texts:
            sys.stdout.write(text)
        return EXIT_OK
    os.makedirs(args.out, exist_ok=True)
    for n, text in texts:
        path = Path(args.out) / f"{args.family}_{n}.lzg"
        _write_text(str(path), text, "model")
        print(path)
    return EXIT_OK


def _oracle_aggregation(seed: int, count: int) -> dict:
    failures = []
    for k in range(count):
        rng = Random(seed + k)
        net = oracle.random_net(rng)
        word = oracle.random_feasible_word(net, rng) or ()
        if not oracle.check_aggregation(net, word):
            failures.append({"seed": seed + k, "word": list(word)})
        log.debug("aggregation %d/%d", k + 1, count)
    return {"suite": "aggregation", "seed": seed, "count": count, "failures": failures}


def _oracle_runs(seed: int, count: int) -> dict:
    failures = []
    checked = 0
    for k in range(count):
        rng = Random(seed + k)
        net = oracle.random_net(rng)
        word = oracle.random_feasible_word(net, rng)
        if word is None:
            continue
        checked += 1
        if not oracle.check_soon_translation(net, word):
            failures.append({"seed": seed + k, "word": list(word)})
        log.debug("runs %d/%d", k + 1, count)
    return {
        "suite": "runs",
        "seed": seed,
        "count": count,
        "checked": checked,
        "failures": failures,
    }


def _oracle_flaws() -> dict:
    widening = oracle.overapproximation_demo()
    regions = oracle.region_elapse_demo()
    failures = []
    if not (
        widening["raw_found"]
        and not widening["global_found"]
        and not widening["local_found"]
        and not widening["witness_class_feasible"]
    ):
        failures.append({"check": "maximized-widening", "report": widening})
    if not regions["base_equiv"] or regions["admissible"]:
        failures.append({"check": "elapse-regions", "report": regions})
    return {
        "suite": "flaws",
        "widening": widening,
        "regions": regions,
        "failures": failures,
    }


def _cmd_oracle(args: argparse.Namespace) -> int:
    if args.count < 0:
        raise _UsageError("--count must be non-negative")
    if args.suite == "aggregation":
        report = _oracle_aggregation(args.seed, args.count)
    elif args.suite == "runs":
        report = _oracle_runs(args.seed, args.count)
    else:
        report = _oracle_flaws()
    report["passed"] = not report["failures"]
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK if report["passed"] else EXIT_ABORT


def _cmd_bench(args: argparse.Namespace) -> int:
    families = args.family or sorted(bench_mod.FAMILIES)
    for family in families:
        if family not in bench_mod.FAMILIES:
            raise _UsageError(f"unknown family {family!r}")
    sizes = _parse_sizes(args.sizes) if args.sizes else None
    rows = bench_mod.run_suite(
        families=families,
        sizes=sizes,
        timeout=args.timeout,
        report=lambda r: log.info(
            "%s %d %s: stored %d in %.3fs%s",
            r.family, r.size, r.algorithm, r.stored, r.seconds,
            " (timed out)" if r.timed_out else "",
        ),
    )
    sys.stdout.write(bench_mod.format_table(rows))
    if args.out is not None:
        _write_text(args.out, bench_mod.rows_json(rows), "report")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lzg",
        description="Timed-automata reachability via global and local zone graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_algorithm(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--algorithm",
            choices=sorted(_ENGINES),
            default="local",
            help="exploration engine (default: local)",
        )

    check = sub.add_parser("check", help="decide reachability of a control state")
    check.add_argument("model", help="model file")
    check.add_argument("target", help="target as proc=state[,proc=state...]")
    add_algorithm(check)
    check.add_argument("--stats-json", metavar="PATH", help="write statistics as JSON")
    check.set_defaults(func=_cmd_check)

    explore = sub.add_parser("explore", help="build the reachable zone graph")
    explore.add_argument("model", help="model file")
    add_algorithm(explore)
    explore.add_argument("--dot", metavar="PATH", help="write the graph in DOT format")
    explore.add_argument(
        "--exhaustive", action="store_true", help="never stop early (the default here)"
    )
    explore.add_argument("--stats-json", metavar="PATH", help="write statistics as JSON")
    explore.set_defaults(func=_cmd_explore)

    gen = sub.add_parser("gen", help="emit benchmark family models")
    gen.add_argument(
        "--family", required=True, choices=sorted(bench_mod.FAMILIES)
    )
    gen.add_argument("--sizes", required=True, metavar="A..B", help="size range")
    gen.add_argument("--out", metavar="DIR", help="write files here instead of stdout")
    gen.set_defaults(func=_cmd_gen)

    orc = sub.add_parser("oracle", help="run the independent cross-check suites")
    orc.add_argument(
        "--suite", required=True, choices=("aggregation", "runs", "flaws")
    )
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--count", type=int, default=100, help="number of random checks")
    orc.set_defaults(func=_cmd_oracle)

    bench = sub.add_parser("bench", help="run the benchmark suite with both engines")
    bench.add_argument(
        "--family",
        action="append",
        metavar="NAME",
        help="restrict to a family (repeatable; default: all)",
    )
    bench.add_argument("--sizes", metavar="A..B", help="override the size range")
    bench.add_argument(
        "--timeout", type=float, default=90.0, help="per-instance seconds (default 90)"
    )
    bench.add_argument("--out", metavar="PATH", help="also write rows as JSON")
    bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"lzg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OverflowAbort as exc:
        print(f"lzg: abort: constants exceed the safe DBM range ({exc})", file=sys.stderr)
        return EXIT_ABORT
    except BrokenPipeError:
        return EXIT_ABORT
    except Exception as exc:  # pragma: no cover - last-resort diagnostics
        log.exception("internal error")
        print(f"lzg: abort: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
