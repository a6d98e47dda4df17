"""Independent cross-checks for the zone engines.

Everything in this module deliberately avoids the integer-encoded DBM
kernel: run feasibility is decided by a small Floyd-Warshall closure over
``(constant, strict)`` pairs and all concrete arithmetic uses
:class:`fractions.Fraction`.  The only imports from the zone layer sit in
the comparison helpers, which need to read the zones they are checking.

The main entry points:

* :func:`exec_global` / :func:`exec_local` replay a concrete timed word
  and return every control state it can end in;
* :func:`find_global_run` / :func:`find_local_run` decide whether an
  action word has *any* feasible timing, and produce one;
* :func:`trace_class` enumerates reorderings of independent actions and
  :func:`interleaving_zones` the end zones of their global runs;
* :func:`check_aggregation` verifies that the synchronized part of a
  local zone equals the union of the global zones of the trace class;
* :func:`check_soon_translation` reorders a local run by execution time
  and confirms the result is a feasible global run;
* :func:`clock_region_equiv` / :func:`check_extrapolation_regions` tie
  the ``extra_m`` widening back to classic region equivalence, while
  :func:`region_equiv` / :func:`region_elapse_demo` probe the
  difference-based variant for reference/offset valuations and show it
  is not preserved by single-process time elapse;
* :func:`maximize_zone` reproduces an older widening for local zones and
  :func:`overapproximation_demo` shows on a small net why it (unlike
  synchronized aggregation) reports unreachable states as reachable;
* :func:`random_net` generates small acyclic networks for fuzzing.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from random import Random
from typing import Iterator, Optional, Sequence

from . import zones as Z
from .dbm import (
    INF,
    INF_BAR,
    Dbm,
    bound,
    bound_is_strict,
    bound_value,
    canonicalize,
    includes,
    subtract,
)
from .explore import explore_global, explore_local, explore_local_raw
from .model import (
    MaxConstants,
    Network,
    StateVector,
    Transition,
    enabled_sync_sets,
    max_constants,
    parse_network,
)

__all__ = [
    "exec_global",
    "exec_local",
    "find_global_run",
    "find_local_run",
    "trace_class",
    "interleaving_zones",
    "check_aggregation",
    "check_soon_translation",
    "clock_region_equiv",
    "region_equiv",
    "region_elapse_demo",
    "check_extrapolation_regions",
    "maximize_zone",
    "overapproximation_demo",
    "random_net",
    "random_feasible_word",
]


# --------------------------------------------------------------------------
# A tiny exact difference-constraint solver.
#
# Variables are event indices 1..m plus the constant 0 at index 0; a
# constraint (a, b, c, strict) reads "theta_a - theta_b <= c" (or "<").

Constraint = tuple[int, int, int, bool]
_Bound = Optional[tuple[int, bool]]  # None is +infinity


def _tighter(x: _Bound, y: _Bound) -> _Bound:
    if x is None:
        return y
    if y is None:
        return x
    if x[0] != y[0]:
        return x if x[0] < y[0] else y
    return x if x[1] else y


def _add(x: _Bound, y: _Bound) -> _Bound:
    if x is None or y is None:
        return None
    return (x[0] + y[0], x[1] or y[1])


def _solve(n_events: int, constraints: Sequence[Constraint]) -> Optional[list[Fraction]]:
    """Feasible event times for the constraints, or ``None``.

    Index 0 is the constant zero; the result lists theta_1..theta_m.
    """
    n = n_events + 1
    dist: list[list[_Bound]] = [[None] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = (0, False)
    for a, b, c, strict in constraints:
        dist[a][b] = _tighter(dist[a][b], (c, strict))
    for k in range(n):
        for i in range(n):
            ik = dist[i][k]
            if ik is None:
                continue
            row_k = dist[k]
            row_i = dist[i]
            for j in range(n):
                row_i[j] = _tighter(row_i[j], _add(ik, row_k[j]))
    for i in range(n):
        d = dist[i][i]
        if d is not None and (d[0] < 0 or (d[0] == 0 and d[1])):
            return None

    # Greedy assignment: canonical tightness guarantees that any value in
    # the interval induced by already-fixed variables extends to a full
    # solution.
    values: list[Fraction] = [Fraction(0)]
    for i in range(1, n):
        lo: Optional[Fraction] = None
        lo_strict = False
        hi: Optional[Fraction] = None
        hi_strict = False
        for j in range(i):
            up = dist[i][j]  # theta_i - theta_j <= c
            if up is not None:
                cand = values[j] + up[0]
                if hi is None or cand < hi or (cand == hi and up[1]):
                    hi, hi_strict = cand, up[1]
            down = dist[j][i]  # theta_j - theta_i <= c
            if down is not None:
                cand = values[j] - down[0]
                if lo is None or cand > lo or (cand == lo and down[1]):
                    lo, lo_strict = cand, down[1]
        values.append(_pick_rational(lo, lo_strict, hi, hi_strict))
    return values[1:]


def _pick_rational(lo, lo_strict, hi, hi_strict) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1 if hi_strict else hi
    if hi is None:
        return lo + 1 if lo_strict else lo
    if not lo_strict and lo == hi:
        return lo
    mid = (lo + hi) / 2
    if not lo_strict and lo == mid:
        return lo
    return mid


# --------------------------------------------------------------------------
# Concrete executions

TimedWord = Sequence[tuple[str, Fraction]]


def _combos(net: Network, state: StateVector, action: str) -> list[tuple[Transition, ...]]:
    try:
        return enabled_sync_sets(net, state, action)
    except ValueError:
        return []


def _atom_holds(value: Fraction, op: str, const: int) -> bool:
    if op == "<":
        return value < const
    if op == "<=":
        return value <= const
    if op == "==":
        return value == const
    if op == ">=":
        return value >= const
    return value > const


def exec_global(net: Network, run: TimedWord) -> set[StateVector]:
    """All control states a concrete global run can end in.

    Event times must be non-decreasing from 0; an empty set means the run
    is infeasible.  Branching over nondeterministic transitions is
    followed exhaustively.
    """
    return _exec(net, run, local=False)


def exec_local(net: Network, run: TimedWord) -> set[StateVector]:
    """Like :func:`exec_global`, but each process has its own clock line:
    event times only need to be non-decreasing per participating process.
    """
    return _exec(net, run, local=True)


def _exec(net: Network, run: TimedWord, *, local: bool) -> set[StateVector]:
    zero = Fraction(0)
    # Configuration: control state, last reset time per clock, and the
    # current time of each process (one shared entry suffices globally).
    init_resets = {x: zero for x in net.clocks}
    init_clock_line = {p.name: zero for p in net.processes}
    configs = [(net.initial_state, init_resets, init_clock_line)]
    for action, theta in run:
        if theta < 0:
            return set()
        next_configs = []
        seen = set()
        for state, resets, line in configs:
            if local:
                if any(theta < line[p] for p in net.dom.get(action, ())):
                    continue
            else:
                if any(theta < t for t in line.values()):
                    continue
            for combo in _combos(net, state, action):
                ok = True
                for tr in combo:
                    for atom in tr.guard:
                        if not _atom_holds(theta - resets[atom.clock], atom.op, atom.const):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    continue
                new_state = list(state)
                new_resets = dict(resets)
                new_line = dict(line)
                for tr in combo:
                    new_state[net.proc_index[tr.proc]] = tr.tgt
                    for x in tr.resets:
                        new_resets[x] = theta
                    new_line[tr.proc] = theta
                if not local:
                    for p in new_line:
                        new_line[p] = theta
                key = (tuple(new_state), tuple(sorted(new_resets.items())),
                       tuple(sorted(new_line.items())))
                if key in seen:
                    continue
                seen.add(key)
                next_configs.append((tuple(new_state), new_resets, new_line))
        configs = next_configs
        if not configs:
            return set()
    return {state for state, _, _ in configs}


# --------------------------------------------------------------------------
# Run search

Run = tuple[list[Fraction], StateVector]


def find_global_run(net: Network, word: Sequence[str]) -> Optional[Run]:
    """A feasible timing for ``word`` under one shared time line."""
    return next(_search_runs(net, word, local=False), None)


def find_local_run(net: Network, word: Sequence[str]) -> Optional[Run]:
    """A feasible timing for ``word`` with per-process time lines."""
    return next(_search_runs(net, word, local=True), None)


def _search_runs(net: Network, word: Sequence[str], *, local: bool) -> Iterator[Run]:
    m = len(word)
    base: list[Constraint] = [(0, i, 0, False) for i in range(1, m + 1)]
    if not local:
        base += [(i, i + 1, 0, False) for i in range(1, m)]

    def rec(pos: int, state: StateVector, resets: dict[str, int],
            last_event: dict[str, int], acc: list[Constraint]) -> Iterator[Run]:
        if pos == m:
            times = _solve(m, acc)
            if times is not None:
                yield times, state
            return
        action = word[pos]
        e = pos + 1
        for combo in _combos(net, state, action):
            cons = list(acc)
            if local:
                for tr in combo:
                    cons.append((last_event[tr.proc], e, 0, False))
            new_resets = dict(resets)
            new_last = dict(last_event)
            new_state = list(state)
            for tr in combo:
                for atom in tr.guard:
                    r = resets[atom.clock]
                    c = atom.const
                    if atom.op in ("<", "<="):
                        cons.append((e, r, c, atom.op == "<"))
                    elif atom.op in (">", ">="):
                        cons.append((r, e, -c, atom.op == ">"))
                    else:
                        cons.append((e, r, c, False))
                        cons.append((r, e, -c, False))
                for x in tr.resets:
                    new_resets[x] = e
                new_last[tr.proc] = e
                new_state[net.proc_index[tr.proc]] = tr.tgt
            yield from rec(pos + 1, tuple(new_state), new_resets, new_last, cons)

    zero_resets = {x: 0 for x in net.clocks}
    zero_last = {p.name: 0 for p in net.processes}
    return rec(0, net.initial_state, zero_resets, zero_last, base)


# --------------------------------------------------------------------------
# Trace classes and the aggregation cross-check


def trace_class(net: Network, word: Sequence[str], limit: int = 10000) -> set[tuple[str, ...]]:
    """All reorderings of ``word`` by swapping adjacent independent actions.

    Two actions are independent when no process participates in both.
    """
    start = tuple(word)
    seen = {start}
    frontier = [start]
    while frontier:
        w = frontier.pop()
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a == b or set(net.dom[a]) & set(net.dom[b]):
                continue
            swapped = w[:i] + (b, a) + w[i + 2:]
            if swapped not in seen:
                if len(seen) >= limit:
                    raise RuntimeError("trace class exceeds enumeration limit")
                seen.add(swapped)
                frontier.append(swapped)
    return seen


def _local_zone_of_word(net: Network, nv: Z.NetVars, word: Sequence[str]):
    """Local zone and state after ``word`` (first transition choice each
    step), or ``None`` when some step is infeasible."""
    zone = Z.initial_local_zone(nv)
    state = net.initial_state
    for action in word:
        combos = _combos(net, state, action)
        if not combos:
            return None
        combo = combos[0]
        cons = Z.sync_constraints(nv, net.dom[action])
        resets: list[str] = []
        for tr in combo:
            cons.extend(Z.guard_constraints_local(nv, tr.guard))
            resets.extend(tr.resets)
        nxt = Z.constrain_local(zone, cons)
        if nxt is None:
            return None
        zone = Z.local_elapse(Z.apply_resets_local(nxt, resets))
        state = _advance(net, state, combo)
    return zone, state


def _global_zone_of_word(net: Network, nv: Z.NetVars, word: Sequence[str]):
    zone = Z.initial_global_zone(nv)
    state = net.initial_state
    for action in word:
        combos = _combos(net, state, action)
        if not combos:
            return None
        combo = combos[0]
        cons: list[tuple[int, int, int]] = []
        resets: list[str] = []
        for tr in combo:
            cons.extend(Z.guard_constraints_global(nv, tr.guard))
            resets.extend(tr.resets)
        nxt = Z.constrain_global(zone, cons)
        if nxt is None:
            return None
        zone = Z.global_elapse(Z.apply_resets_global(nxt, resets))
        state = _advance(net, state, combo)
    return zone, state


def _advance(net: Network, state: StateVector, combo) -> StateVector:
    out = list(state)
    for tr in combo:
        out[net.proc_index[tr.proc]] = tr.tgt
    return tuple(out)


def interleaving_zones(net: Network, word: Sequence[str]) -> list[Z.GlobalZone]:
    """Non-empty end zones of the global runs over ``word``'s trace class.

    The list denotes the union of its members; it is empty when no
    reordering of the word is feasible.
    """
    nv = Z.NetVars(net)
    out = []
    for w in sorted(trace_class(net, word)):
        got = _global_zone_of_word(net, nv, w)
        if got is not None:
            out.append(got[0])
    return out


def check_aggregation(net: Network, word: Sequence[str]) -> bool:
    """Synchronized-part of the local zone == union of global zones of the
    trace class of ``word``.

    The union comparison subtracts every global zone from the collapsed
    local zone and requires an empty remainder, plus plain inclusion for
    the other direction.
    """
    nv = Z.NetVars(net)
    local = _local_zone_of_word(net, nv, word)
    globals_ = interleaving_zones(net, word)
    if local is None:
        return not globals_
    collapsed = Z.global_of_sync(local[0])
    if collapsed is None:
        return not globals_
    if not globals_:
        return False
    for g in globals_:
        if not includes(collapsed.dbm, g.dbm):
            return False
    remainder = [collapsed.dbm]
    for g in globals_:
        remainder = [piece for r in remainder for piece in subtract(r, g.dbm)]
    return not remainder


# --------------------------------------------------------------------------
# Local-to-global run translation


def check_soon_translation(net: Network, word: Sequence[str]) -> bool:
    """Reorder a feasible local run by execution time and check that the
    result is a feasible global run reaching the same control state.

    Vacuously true when the word has no feasible local timing.
    """
    found = find_local_run(net, word)
    if found is None:
        return True
    times, final_state = found
    order = sorted(range(len(word)), key=lambda i: (times[i], i))
    reordered = [(word[i], times[i]) for i in order]
    reached = exec_global(net, reordered)
    return final_state in reached


# --------------------------------------------------------------------------
# Region equivalence and extrapolation soundness

Valuation = dict[str, Fraction]


def clock_region_equiv(u: Valuation, v: Valuation, bounds: MaxConstants) -> bool:
    """Classic region equivalence of clock valuations with per-clock
    maximum constants.

    Clocks that are never compared to a constant cannot influence any
    guard and are ignored.
    """
    relevant = [x for x in u if bounds.of(x) is not None]
    small = []
    for x in relevant:
        m = bounds.of(x)
        above_u, above_v = u[x] > m, v[x] > m
        if above_u != above_v:
            return False
        if above_u:
            continue
        if int(u[x]) != int(v[x]):
            return False
        if (u[x] == int(u[x])) != (v[x] == int(v[x])):
            return False
        small.append(x)
    frac = lambda q: q - int(q)
    for x in small:
        for y in small:
            if (frac(u[x]) <= frac(u[y])) != (frac(v[x]) <= frac(v[y])):
                return False
    return True


def _zone_constraints(dbm, var_of: dict[int, int]) -> list[Constraint]:
    """Decode the finite entries of a clock-zone DBM into solver form."""
    out: list[Constraint] = []
    n = dbm.layout.n
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            enc = dbm[i, j]
            if enc >= INF_BAR:
                continue
            out.append((var_of[i], var_of[j], bound_value(enc), bound_is_strict(enc)))
    return out


def check_extrapolation_regions(
    zone: Z.ClockZone, consts: MaxConstants, rng: Random, samples: int = 25
) -> bool:
    """Every point of ``extra_m(zone)`` is region-equivalent to a point of
    ``zone``.

    Sampled points of the widened zone are intersected with their own
    region, described as difference constraints, and the original zone
    must meet that region.
    """
    from .dbm import sample_point

    clocks = list(zone.vars.net.clocks)
    var_of = {i: i for i in range(len(clocks) + 1)}
    widened = Z.extra_m(zone, consts)
    base = _zone_constraints(zone.dbm, var_of)
    for _ in range(samples):
        point = sample_point(widened.dbm, rng)
        u = {x: point[i + 1] for i, x in enumerate(clocks)}
        cons = list(base)
        small = []
        for i, x in enumerate(clocks, start=1):
            m = consts.of(x)
            if m is None:
                continue
            if u[x] > m:
                cons.append((0, i, -m, True))  # x > m
                continue
            floor = int(u[x])
            if u[x] == floor:
                cons.append((i, 0, floor, False))
                cons.append((0, i, -floor, False))
            else:
                cons.append((i, 0, floor + 1, True))
                cons.append((0, i, -floor, True))
            small.append((i, x, floor))
        for (i, x, fx), (j, y, fy) in itertools.permutations(small, 2):
            fu_x, fu_y = u[x] - fx, u[y] - fy
            if fu_x < fu_y:
                cons.append((i, j, fx - fy, True))
            elif fu_x == fu_y:
                cons.append((i, j, fx - fy, False))
        witness = _solve(len(clocks), cons)
        if witness is None:
            return False
        w = {x: witness[i] for i, x in enumerate(clocks)}
        if not clock_region_equiv(u, w, consts):
            return False
    return True


def region_equiv(v1: Valuation, v2: Valuation, cmax: int) -> bool:
    """Difference-based region equivalence of two same-layout valuations.

    For every ordered variable pair the differences must either both
    exceed ``cmax``, both lie below ``-cmax``, or share their integer
    part *and* agree on whether the fractional part is zero.  The last
    condition separates exact-integer differences from nearby fractional
    ones, which is what makes equality guards behave.
    """
    if v1.keys() != v2.keys():
        raise ValueError("valuations must share a layout")
    for a, b in itertools.combinations(v1, 2):
        d1 = v1[a] - v1[b]
        d2 = v2[a] - v2[b]
        if d1 > cmax or d2 > cmax:
            if not (d1 > cmax and d2 > cmax):
                return False
            continue
        if d1 < -cmax or d2 < -cmax:
            if not (d1 < -cmax and d2 < -cmax):
                return False
            continue
        if math.floor(d1) != math.floor(d2):
            return False
        if (d1 == math.floor(d1)) != (d2 == math.floor(d2)):
            return False
    return True


#: Half-integer grid for :func:`region_elapse_demo`.  Classes of the
#: shifted valuation change only at half-integer steps (every base value
#: is an integer), and past 8 all differences sit beyond ``cmax``, which
#: the extra probe at 9 witnesses.
ELAPSE_GRID: tuple[Fraction, ...] = tuple(
    Fraction(k, 2) for k in range(17)
) + (Fraction(9),)


def region_elapse_demo() -> dict:
    """Show that letting one process's time advance does not preserve
    :func:`region_equiv`.

    Two equivalent reference/offset valuations are taken; the first
    process's reference advances by 2 in one of them, and every grid
    shift of the other fails to restore equivalence: the reference-offset
    difference pins the shift to exactly 2, which breaks the
    reference-reference difference.
    """
    cmax = 3
    v1 = {"x": Fraction(0), "t1": Fraction(0), "y": Fraction(0), "t2": Fraction(4)}
    v2 = {"x": Fraction(0), "t1": Fraction(0), "y": Fraction(0), "t2": Fraction(5)}
    base_equiv = region_equiv(v1, v2, cmax)
    shifted = dict(v1, t1=v1["t1"] + 2)
    admissible = [
        d for d in ELAPSE_GRID
        if region_equiv(shifted, dict(v2, t1=v2["t1"] + d), cmax)
    ]
    return {
        "cmax": cmax,
        "base_equiv": base_equiv,
        "advance": "2 on process 1",
        "grid": [str(d) for d in ELAPSE_GRID],
        "admissible": [str(d) for d in admissible],
        "preserved": bool(admissible),
    }


# --------------------------------------------------------------------------
# The older widening, and why synchronization matters


def maximize_zone(z: Z.LocalZone, consts: MaxConstants) -> Z.LocalZone:
    """Uniform widening of a raw local zone at the largest constant.

    Applied to offset variables this forgets *when* resets happened
    relative to other processes, which over-approximates: see
    :func:`overapproximation_demo`.
    """
    cmax = consts.cmax or 0
    m = z.dbm.mutable_copy()
    n = z.dbm.layout.n
    hi = bound(cmax)
    lo = bound(-cmax, strict=True)
    changed = False
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            e = m[i, j]
            if e >= INF_BAR:
                continue
            if e > hi:
                m[i, j] = INF
                changed = True
            elif e < lo:
                m[i, j] = lo
                changed = True
    if not changed:
        return z
    d = canonicalize(Dbm(z.dbm.layout, m))
    assert d is not None, "widening only grows the zone"
    return z if d == z.dbm else Z.LocalZone(z.vars, d)


def overapproximation_demo(src: Optional[str] = None) -> dict:
    """Compare three engines on a net whose last action is a missed
    synchronization.

    Returns a verdict dictionary; the raw engine's witness is checked
    against the exact run search, and so is its whole trace class, to
    demonstrate that the hit is spurious.
    """
    net = parse_network(src) if src else _demo_net()
    target = _demo_target(net)
    consts = max_constants(net)
    g = explore_global(net, target)
    l = explore_local(net, target)
    raw = explore_local_raw(
        net, target, maximize=lambda z: maximize_zone(z, consts)
    )
    out = {
        "target": target,
        "global_found": g.found,
        "local_found": l.found,
        "raw_found": raw.found,
        "spurious": raw.found and not g.found,
        "raw_witness": list(raw.witness) if raw.witness else None,
    }
    if raw.found and raw.witness:
        members = sorted(trace_class(net, raw.witness))
        out["witness_class_size"] = len(members)
        out["witness_class_feasible"] = [
            "".join(w) for w in members if find_global_run(net, w) is not None
        ]
    return out


_DEMO_SRC = """\
system demo
process A1
clock A1 x
state A1 p0 initial
state A1 p1
state A1 p2
trans A1 p0 p1 a1 guard{x==2} reset{x}
trans A1 p1 p2 c guard{x==2}
process A2
clock A2 z
state A2 q0 initial
state A2 q1
state A2 q2
state A2 q3
trans A2 q0 q1 b1 guard{z==2} reset{z}
trans A2 q1 q2 b2 guard{z==3} reset{z}
trans A2 q2 q3 c
"""


def _demo_net() -> Network:
    return parse_network(_DEMO_SRC)


def _demo_target(net: Network) -> str:
    # Last state of every process.
    return ",".join(f"{p.name}={p.states[-1]}" for p in net.processes)


# --------------------------------------------------------------------------
# Random nets for fuzzing


def random_net(
    rng: Random,
    n_procs: int = 2,
    chain: int = 3,
    n_shared: int = 2,
    max_const: int = 3,
) -> Network:
    """A random acyclic network, built as source text and parsed.

    Each process is a chain of ``chain`` transitions over one own clock;
    ``n_shared`` actions are shared between random process pairs, the
    rest are private.  Guards and resets are random.
    """
    lines = ["system fuzz"]
    actions: list[list[str]] = [
        [f"p{p}_{s}" for s in range(chain)] for p in range(n_procs)
    ]
    for _ in range(n_shared):
        if n_procs < 2:
            break
        a, b = rng.sample(range(n_procs), 2)
        name = f"sh{rng.randrange(10**6)}"
        actions[a][rng.randrange(chain)] = name
        actions[b][rng.randrange(chain)] = name
    for p in range(n_procs):
        proc = f"P{p}"
        clock = f"c{p}"
        lines.append(f"process {proc}")
        lines.append(f"clock {proc} {clock}")
        lines.append(f"state {proc} s{p}_0 initial")
        for s in range(1, chain + 1):
            lines.append(f"state {proc} s{p}_{s}")
        for s in range(chain):
            parts = [f"trans {proc} s{p}_{s} s{p}_{s + 1} {actions[p][s]}"]
            if rng.random() < 0.7:
                op = rng.choice(["<", "<=", "==", ">=", ">"])
                parts.append(f"guard{{{clock}{op}{rng.randint(0, max_const)}}}")
            if rng.random() < 0.5:
                parts.append(f"reset{{{clock}}}")
            lines.append(" ".join(parts))
    return parse_network("\n".join(lines) + "\n")


def random_feasible_word(
    net: Network, rng: Random, max_len: int = 5, attempts: int = 40
) -> Optional[tuple[str, ...]]:
    """A random action word with a feasible local timing, if one is found."""
    for _ in range(attempts):
        state = net.initial_state
        word: list[str] = []
        for _ in range(rng.randint(1, max_len)):
            enabled = [a for a in net.actions if _combos(net, state, a)]
            if not enabled:
                break
            action = rng.choice(enabled)
            word.append(action)
            state = _advance(net, state, _combos(net, state, action)[0])
        if word and find_local_run(net, word) is not None:
            return tuple(word)
    return None
