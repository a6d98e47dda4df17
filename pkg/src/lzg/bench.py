"""Benchmark model families and a small suite runner.

Each family is a parametric generator returning model source text (also
used by the ``gen`` CLI command), chosen to stress different aspects of
the two engines:

``parallel``
    Fully independent processes, each resetting its own clock once behind
    a lower-bound guard.  Global exploration stores one zone per firing
    order; local exploration aggregates them, so the gap grows from
    factorial to exponential-in-states only.

``fischer``
    Fischer's mutual exclusion with an explicit lock process.  Every
    action involves the lock, so no two actions are independent, trace
    classes are singletons, and the two engines build isomorphic graphs:
    their stored counts must be equal.

``dining``
    Timed dining philosophers with fork processes.  Neighbours conflict,
    distant philosophers are independent: a middle ground.

``corsso``
    Independent multi-path authentication phases followed by one global
    commit synchronization.

``critical``
    A token ring where entering the critical section synchronizes with
    the token's position.

Every instance carries a fixed reachability question (see
:func:`default_target`): whether everyone finishes (``parallel``,
``corsso``) or whether the mutual-exclusion property breaks (``fischer``,
``dining``, ``critical``).  Runs are exhaustive regardless, so the
verdict comes for free and the node counts always describe the full
graph.

Counts depend on the exact encodings above; they are meant for comparing
the two algorithms against each other, not for comparison with other
tools' models of the same name.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .explore import explore_global, explore_local
from .model import Network, parse_network

__all__ = [
    "FAMILIES",
    "model_source",
    "build",
    "default_target",
    "BenchRow",
    "run_instance",
    "run_suite",
    "format_table",
    "rows_json",
]


def _parallel(n: int) -> str:
    lines = [f"system parallel_{n}"]
    for i in range(1, n + 1):
        lines += [
            f"process P{i}",
            f"clock P{i} x{i}",
            f"state P{i} a{i} initial",
            f"state P{i} b{i}",
            f"trans P{i} a{i} b{i} w{i} guard{{x{i}>=1}} reset{{x{i}}}",
        ]
    return "\n".join(lines) + "\n"


def _fischer(n: int) -> str:
    lines = [f"system fischer_{n}", "process Lock"]
    lines += [f"state Lock l0 initial"]
    lines += [f"state Lock l{i}" for i in range(1, n + 1)]
    # Lock transitions are appended after the processes are declared so
    # that action first-use order groups by process; easier to eyeball.
    lock_trans = []
    for i in range(1, n + 1):
        lock_trans.append(f"trans Lock l0 l0 try{i}")
        for j in range(0, n + 1):
            lock_trans.append(f"trans Lock l{j} l{i} set{i}")
        lock_trans.append(f"trans Lock l{i} l{i} enter{i}")
        lock_trans.append(f"trans Lock l0 l0 retry{i}")
        lock_trans.append(f"trans Lock l{i} l0 exit{i}")
    lines += lock_trans
    for i in range(1, n + 1):
        p = f"P{i}"
        lines += [
            f"process {p}",
            f"clock {p} x{i}",
            f"state {p} idle{i} initial",
            f"state {p} req{i}",
            f"state {p} wait{i}",
            f"state {p} cs{i}",
            f"trans {p} idle{i} req{i} try{i} reset{{x{i}}}",
            f"trans {p} req{i} wait{i} set{i} guard{{x{i}<=1}} reset{{x{i}}}",
            f"trans {p} wait{i} cs{i} enter{i} guard{{x{i}>=2}}",
            f"trans {p} wait{i} req{i} retry{i} reset{{x{i}}}",
            f"trans {p} cs{i} idle{i} exit{i}",
        ]
    return "\n".join(lines) + "\n"


def _dining(n: int) -> str:
    lines = [f"system dining_{n}"]

    def right_fork(i: int) -> int:
        return i % n + 1

    for i in range(1, n + 1):
        p = f"Phil{i}"
        lines += [
            f"process {p}",
            f"clock {p} x{i}",
            f"state {p} think{i} initial",
            f"state {p} hasL{i}",
            f"state {p} eat{i}",
            f"trans {p} think{i} hasL{i} grabL{i} reset{{x{i}}}",
            f"trans {p} hasL{i} eat{i} grabR{i} guard{{x{i}<=1}}",
            f"trans {p} eat{i} think{i} rel{i} guard{{x{i}>=2}}",
        ]
    for j in range(1, n + 1):
        f = f"Fork{j}"
        left_user = j           # phil j grabs fork j as left fork
        right_user = (j - 2) % n + 1  # phil j-1 grabs fork j as right fork
        lines += [
            f"process {f}",
            f"state {f} free{j} initial",
            f"state {f} byL{j}",
            f"state {f} byR{j}",
            f"trans {f} free{j} byL{j} grabL{left_user}",
            f"trans {f} byL{j} free{j} rel{left_user}",
        ]
        if right_user != left_user:
            lines += [
                f"trans {f} free{j} byR{j} grabR{right_user}",
                f"trans {f} byR{j} free{j} rel{right_user}",
            ]
    return "\n".join(lines) + "\n"


def _corsso(n: int) -> str:
    lines = [f"system corsso_{n}"]
    for i in range(1, n + 1):
        p = f"P{i}"
        lines += [
            f"process {p}",
            f"clock {p} x{i}",
            f"state {p} start{i} initial",
            f"state {p} fast{i}",
            f"state {p} slow{i}",
            f"state {p} fin{i}",
            f"state {p} end{i}",
            f"trans {p} start{i} fast{i} pickf{i} reset{{x{i}}}",
            f"trans {p} start{i} slow{i} picks{i} reset{{x{i}}}",
            f"trans {p} fast{i} fin{i} authf{i} guard{{x{i}>=2&&x{i}<=4}}",
            f"trans {p} slow{i} fin{i} auths{i} guard{{x{i}>=5}}",
            f"trans {p} fin{i} end{i} commit",
        ]
    return "\n".join(lines) + "\n"


def _critical(n: int) -> str:
    lines = [f"system critical_{n}", "process Token", "clock Token y"]
    lines += [f"state Token t1 initial"]
    lines += [f"state Token t{i}" for i in range(2, n + 1)]
    lines += [f"state Token b{i}" for i in range(1, n + 1)]
    for i in range(1, n + 1):
        nxt = i % n + 1
        # entering captures the token until the leave passes it on
        lines.append(f"trans Token t{i} t{nxt} pass{i} guard{{y>=1}} reset{{y}}")
        lines.append(f"trans Token t{i} b{i} enter{i}")
        lines.append(f"trans Token b{i} t{nxt} leave{i} reset{{y}}")
    for i in range(1, n + 1):
        p = f"P{i}"
        lines += [
            f"process {p}",
            f"clock {p} x{i}",
            f"state {p} out{i} initial",
            f"state {p} crit{i}",
            f"trans {p} out{i} crit{i} enter{i} reset{{x{i}}}",
            f"trans {p} crit{i} out{i} leave{i} guard{{x{i}<=2}}",
        ]
    return "\n".join(lines) + "\n"


FAMILIES: dict[str, Callable[[int], str]] = {
    "parallel": _parallel,
    "fischer": _fischer,
    "dining": _dining,
    "corsso": _corsso,
    "critical": _critical,
}

DEFAULT_SIZES: dict[str, tuple[int, ...]] = {
    "parallel": (2, 3, 4, 5, 6),
    "fischer": (2, 3),
    "dining": (2, 3, 4),
    "corsso": (2, 3),
    "critical": (2, 3),
}


def model_source(family: str, size: int) -> str:
    """Model text for one family instance."""
    try:
        gen = FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown family {family!r}; choose from {', '.join(sorted(FAMILIES))}"
        ) from None
    if size < 2:
        raise ValueError("family size must be at least 2")
    return gen(size)


def build(family: str, size: int) -> Network:
    return parse_network(model_source(family, size), f"{family}_{size}")


def default_target(family: str, size: int) -> str:
    """The instance's reachability question, as a target string.

    Completion targets are reachable; the mutual-exclusion violations
    (two processes in the critical section, every philosopher eating)
    are not.
    """
    if family == "parallel":
        return ",".join(f"P{i}=b{i}" for i in range(1, size + 1))
    if family == "fischer":
        return "P1=cs1,P2=cs2"
    if family == "dining":
        return ",".join(f"Phil{i}=eat{i}" for i in range(1, size + 1))
    if family == "corsso":
        return ",".join(f"P{i}=end{i}" for i in range(1, size + 1))
    if family == "critical":
        return "P1=crit1,P2=crit2"
    raise ValueError(f"unknown family {family!r}")


@dataclass
class BenchRow:
    family: str
    size: int
    algorithm: str
    target: str
    verdict: str
    visited: int
    stored: int
    covered: int
    seconds: float
    timed_out: bool


def run_instance(
    family: str, size: int, algorithm: str, timeout: Optional[float] = 90.0
) -> BenchRow:
    """Explore one instance exhaustively and record verdict plus counts."""
    net = build(family, size)
    target = default_target(family, size)
    engine = {"global": explore_global, "local": explore_local}[algorithm]
    result = engine(net, target, exhaustive=True, deadline=timeout)
    return BenchRow(
        family=family,
        size=size,
        algorithm=algorithm,
        target=target,
        verdict="reachable" if result.found else "unreachable",
        visited=result.visited,
        stored=result.stored,
        covered=result.covered,
        seconds=result.seconds,
        timed_out=result.timed_out,
    )


def run_suite(
    families: Optional[Sequence[str]] = None,
    sizes: Optional[Sequence[int]] = None,
    timeout: Optional[float] = 90.0,
    report: Optional[Callable[[BenchRow], None]] = None,
) -> list[BenchRow]:
    """Run both engines over the selected instances.

    ``sizes=None`` uses per-family defaults; an explicit list applies to
    every selected family.  ``report`` is called after each row (the CLI
    uses it for incremental output).
    """
    rows = []
    for family in families or sorted(FAMILIES):
        for size in sizes or DEFAULT_SIZES[family]:
            for algorithm in ("global", "local"):
                row = run_instance(family, size, algorithm, timeout)
                rows.append(row)
                if report is not None:
                    report(row)
    return rows


_COLUMNS = (
    "family", "n", "algorithm", "verdict", "visited", "stored", "covered", "seconds"
)


def format_table(rows: Sequence[BenchRow]) -> str:
    data = [
        (
            r.family,
            str(r.size),
            r.algorithm,
            r.verdict,
            str(r.visited),
            str(r.stored),
            str(r.covered),
            f"{r.seconds:.3f}" + ("*" if r.timed_out else ""),
        )
        for r in rows
    ]
    widths = [
        max(len(_COLUMNS[c]), *(len(d[c]) for d in data)) if data else len(_COLUMNS[c])
        for c in range(len(_COLUMNS))
    ]
    out = ["  ".join(h.ljust(w) for h, w in zip(_COLUMNS, widths)).rstrip()]
    for d in data:
        out.append("  ".join(v.ljust(w) for v, w in zip(d, widths)).rstrip())
    if any(r.timed_out for r in rows):
        out.append("* timed out; counts are lower bounds")
    return "\n".join(out) + "\n"


def rows_json(rows: Sequence[BenchRow]) -> str:
    payload = [
        {
            "family": r.family,
            "size": r.size,
            "algorithm": r.algorithm,
            "target": r.target,
            "verdict": r.verdict,
            "visited": r.visited,
            "stored": r.stored,
            "covered": r.covered,
            "seconds": round(r.seconds, 6),
            "timed_out": r.timed_out,
        }
        for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"
