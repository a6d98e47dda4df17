"""Reachability exploration engines.

Three engines share one worklist skeleton and differ only in their step
semantics and subsumption test:

``explore_global``
    Classic zone exploration of the synchronized product.  One reference
    time; successors interleave independent actions.

``explore_local``
    Aggregated exploration over local zones.  Each process keeps its own
    reference time; an action step synchronizes only the participating
    processes.  Nodes reached by reorderings of independent actions end
    up with identical zones and collapse into one node, so the graph can
    be exponentially smaller than the global one.

``explore_local_raw``
    Local stepping *without* the synchronization constraint, optionally
    combined with a user-supplied zone widening.  This reproduces an
    older style of local-time analysis; it over-approximates and is kept
    for comparison experiments (see :mod:`lzg.oracle`).

Subsumption works on finite-range projections: a candidate node is
covered when its clock-value projection is included in the extrapolated
projection of an established node with the same control state.  For local
zones the projection goes through the synchronized part first, which is
what makes aggregated zones comparable at all.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Union

from . import zones as Z
from .dbm import includes
from .model import (
    Network,
    StateVector,
    TargetSpec,
    Transition,
    enabled_sync_sets,
    max_constants,
    parse_target,
)

__all__ = [
    "SearchNode",
    "SearchResult",
    "explore_global",
    "explore_local",
    "explore_local_raw",
    "render_dot",
    "audit",
]

Zone = Union[Z.GlobalZone, Z.LocalZone]


@dataclass(eq=False)
class SearchNode:
    """One node of the reachability graph."""

    index: int
    state: StateVector
    zone: Zone
    parent: Optional["SearchNode"]
    action: Optional[str]
    covered_by: Optional["SearchNode"] = None
    expanded: bool = False
    # Cached projections used by the subsumption test.
    proj: Optional[Z.ClockZone] = field(default=None, repr=False)
    extra: Optional[Z.ClockZone] = field(default=None, repr=False)

    @property
    def covered(self) -> bool:
        return self.covered_by is not None

    def word(self) -> tuple[str, ...]:
        """Action labels along the path from the root to this node."""
        labels = []
        node: Optional[SearchNode] = self
        while node is not None and node.action is not None:
            labels.append(node.action)
            node = node.parent
        return tuple(reversed(labels))


@dataclass(eq=False)
class SearchResult:
    algorithm: str
    net: Network
    nodes: list[SearchNode]
    found: bool
    witness: Optional[tuple[str, ...]]
    seconds: float
    timed_out: bool
    truncated: bool
    complete: bool
    retro_cover: bool
    _sem: "_Semantics" = field(repr=False)

    @property
    def visited(self) -> int:
        return len(self.nodes)

    @property
    def covered(self) -> int:
        return sum(1 for n in self.nodes if n.covered)

    @property
    def stored(self) -> int:
        return self.visited - self.covered

    def stats(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "visited": self.visited,
            "stored": self.stored,
            "covered": self.covered,
            "found": self.found,
            "witness": list(self.witness) if self.witness is not None else None,
            "timed_out": self.timed_out,
            "truncated": self.truncated,
            "seconds": round(self.seconds, 6),
        }


def _advance(net: Network, state: StateVector, combo: tuple[Transition, ...]) -> StateVector:
    out = list(state)
    for tr in combo:
        out[net.proc_index[tr.proc]] = tr.tgt
    return tuple(out)


class _Semantics:
    """Step + subsumption strategy shared by the worklist loop."""

    algorithm: str = "?"

    def __init__(self, net: Network) -> None:
        self.net = net
        self.nv = Z.NetVars(net)
        self.consts = max_constants(net)

    def initial_zone(self) -> Zone:
        raise NotImplementedError

    def successors(
        self, state: StateVector, zone: Zone
    ) -> Iterator[tuple[str, StateVector, Zone]]:
        raise NotImplementedError

    def projection(self, zone: Zone) -> Optional[Z.ClockZone]:
        raise NotImplementedError

    def covers(self, est: SearchNode, proj: Z.ClockZone) -> bool:
        if est.proj is None:
            return False
        if est.extra is None:
            est.extra = Z.extra_m(est.proj, self.consts)
        return includes(est.extra.dbm, proj.dbm)


class _GlobalSem(_Semantics):
    algorithm = "global"

    def initial_zone(self) -> Z.GlobalZone:
        return Z.initial_global_zone(self.nv)

    def successors(self, state, zone):
        net, nv = self.net, self.nv
        for action in net.actions:
            for combo in enabled_sync_sets(net, state, action):
                cons = []
                resets: list[str] = []
                for tr in combo:
                    cons.extend(Z.guard_constraints_global(nv, tr.guard))
                    resets.extend(tr.resets)
                z2 = Z.constrain_global(zone, cons)
                if z2 is None:
                    continue
                z2 = Z.global_elapse(Z.apply_resets_global(z2, resets))
                yield action, _advance(net, state, combo), z2

    def projection(self, zone):
        return Z.to_clock_zone(zone)


class _LocalSem(_Semantics):
    algorithm = "local"

    def initial_zone(self) -> Z.LocalZone:
        return Z.initial_local_zone(self.nv)

    def successors(self, state, zone):
        net, nv = self.net, self.nv
        for action in net.actions:
            sets = enabled_sync_sets(net, state, action)
            if not sets:
                continue
            sync_cons = Z.sync_constraints(nv, net.dom[action])
            for combo in sets:
                cons = list(sync_cons)
                resets: list[str] = []
                for tr in combo:
                    cons.extend(Z.guard_constraints_local(nv, tr.guard))
                    resets.extend(tr.resets)
                z2 = Z.constrain_local(zone, cons)
                if z2 is None:
                    continue
                z2 = Z.local_elapse(Z.apply_resets_local(z2, resets))
                yield action, _advance(net, state, combo), z2

    def projection(self, zone):
        g = Z.global_of_sync(zone)
        return None if g is None else Z.to_clock_zone(g)


class _RawLocalSem(_Semantics):
    """Local stepping without reference synchronization (over-approximate)."""

    algorithm = "local-raw"

    def __init__(self, net: Network, maximize=None) -> None:
        super().__init__(net)
        self.maximize: Optional[Callable[[Z.LocalZone], Z.LocalZone]] = maximize

    def initial_zone(self) -> Z.LocalZone:
        z = Z.initial_local_zone(self.nv)
        return self.maximize(z) if self.maximize else z

    def successors(self, state, zone):
        net, nv = self.net, self.nv
        for action in net.actions:
            for combo in enabled_sync_sets(net, state, action):
                cons = []
                resets: list[str] = []
                for tr in combo:
                    cons.extend(Z.guard_constraints_local(nv, tr.guard))
                    resets.extend(tr.resets)
                z2 = Z.constrain_local(zone, cons)
                if z2 is None:
                    continue
                z2 = Z.local_elapse(Z.apply_resets_local(z2, resets))
                if self.maximize:
                    z2 = self.maximize(z2)
                yield action, _advance(net, state, combo), z2

    def projection(self, zone):
        return zone  # compare raw local zones directly

    def covers(self, est: SearchNode, proj) -> bool:
        return includes(est.zone.dbm, proj.dbm)


def _resolve_target(net: Network, target) -> Optional[TargetSpec]:
    if target is None or isinstance(target, TargetSpec):
        return target
    return parse_target(net, target)


def _run(
    sem: _Semantics,
    target,
    *,
    retro_cover: bool = True,
    exhaustive: bool = False,
    deadline: Optional[float] = None,
    max_nodes: Optional[int] = None,
) -> SearchResult:
    t0 = time.monotonic()
    net = sem.net
    spec = _resolve_target(net, target)

    root = SearchNode(0, net.initial_state, sem.initial_zone(), None, None)
    root.proj = sem.projection(root.zone)
    nodes = [root]
    store: dict[StateVector, list[SearchNode]] = {root.state: [root]}
    queue: deque[SearchNode] = deque([root])
    found: Optional[SearchNode] = None
    if spec is not None and spec.matches(net, root.state):
        found = root
    timed_out = truncated = False

    while queue and (found is None or exhaustive):
        if deadline is not None and time.monotonic() - t0 > deadline:
            timed_out = True
            break
        if max_nodes is not None and len(nodes) >= max_nodes:
            truncated = True
            break
        node = queue.popleft()
        if node.covered:
            continue  # covered while waiting in the queue
        node.expanded = True
        for action, state2, zone2 in sem.successors(node.state, node.zone):
            child = SearchNode(len(nodes), state2, zone2, node, action)
            child.proj = sem.projection(zone2)
            assert child.proj is not None, "elapsed zones are always observable"
            nodes.append(child)
            if spec is not None and found is None and spec.matches(net, state2):
                found = child
            est_list = store.setdefault(state2, [])
            coverer = None
            for est in est_list:
                if not est.covered and sem.covers(est, child.proj):
                    coverer = est
                    break
            if coverer is not None:
                child.covered_by = coverer
                continue
            if retro_cover:
                for est in est_list:
                    if not est.covered and sem.covers(child, est.proj):
                        est.covered_by = child
                est_list[:] = [e for e in est_list if not e.covered]
            est_list.append(child)
            queue.append(child)

    seconds = time.monotonic() - t0
    complete = not (timed_out or truncated) and (found is None or exhaustive)
    return SearchResult(
        algorithm=sem.algorithm,
        net=net,
        nodes=nodes,
        found=found is not None,
        witness=found.word() if found is not None else None,
        seconds=seconds,
        timed_out=timed_out,
        truncated=truncated,
        complete=complete,
        retro_cover=retro_cover,
        _sem=sem,
    )


def explore_global(net: Network, target=None, **kwargs) -> SearchResult:
    """Explore the synchronized product with a single reference time."""
    return _run(_GlobalSem(net), target, **kwargs)


def explore_local(net: Network, target=None, **kwargs) -> SearchResult:
    """Explore with per-process reference times and zone aggregation."""
    return _run(_LocalSem(net), target, **kwargs)


def explore_local_raw(
    net: Network, target=None, *, maximize=None, **kwargs
) -> SearchResult:
    """Local stepping without synchronization; may report false positives."""
    return _run(_RawLocalSem(net, maximize), target, **kwargs)


# --------------------------------------------------------------------------
# Graph export


def render_dot(result: SearchResult, *, zones: bool = True) -> str:
    """Graphviz rendering; covered nodes are dashed, cover edges dotted."""
    lines = [
        "digraph reachability {",
        "  rankdir=TB;",
        '  node [shape=box, fontname="monospace", fontsize=10];',
    ]
    for n in result.nodes:
        state = "(" + ", ".join(n.state) + ")"
        label = state
        if zones:
            text = str(n.zone).replace(" ", "")
            label += r"\n" + text
        style = ', style=dashed' if n.covered else ""
        lines.append(f'  n{n.index} [label="{label}"{style}];')
    for n in result.nodes:
        if n.parent is not None:
            lines.append(f'  n{n.parent.index} -> n{n.index} [label="{n.action}"];')
        if n.covered_by is not None:
            lines.append(
                f"  n{n.index} -> n{n.covered_by.index} "
                "[style=dotted, constraint=false];"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Structural audit


def audit(result: SearchResult) -> list[str]:
    """Check the internal consistency of a finished search graph.

    Returns a list of problem descriptions (empty when the graph is sound):

    * root and indices: node 0 is the only root, indices are creation order;
    * cover edges: stay within one control state, the subsumption they
      claim still holds, and chains of covers never cycle;
    * closure: in a complete run every uncovered node was expanded and its
      recorded children match a recomputation of its successors;
    * antichain: with retro-coverage on, no stored zone covers another.
    """
    sem = result._sem
    problems: list[str] = []

    for pos, n in enumerate(result.nodes):
        if n.index != pos:
            problems.append(f"node at position {pos} has index {n.index}")
    roots = [n for n in result.nodes if n.parent is None]
    if [n.index for n in roots] != [0]:
        problems.append(f"expected the unique root to be node 0, got {roots}")

    for n in result.nodes:
        c = n.covered_by
        if c is None:
            continue
        if c.state != n.state:
            problems.append(f"cover edge {n.index} -> {c.index} crosses states")
        if n.proj is not None and not sem.covers(c, n.proj):
            problems.append(f"cover edge {n.index} -> {c.index} does not hold")
        seen = {n.index}
        walk: Optional[SearchNode] = c
        while walk is not None:
            if walk.index in seen:
                problems.append(f"cover chain starting at {n.index} cycles")
                break
            seen.add(walk.index)
            walk = walk.covered_by

    if result.complete:
        children: dict[int, list[SearchNode]] = {}
        for n in result.nodes:
            if n.parent is not None:
                children.setdefault(n.parent.index, []).append(n)
        for n in result.nodes:
            if n.covered:
                continue
            if not n.expanded:
                problems.append(f"uncovered node {n.index} was never expanded")
                continue
            recomputed = list(sem.successors(n.state, n.zone))
            recorded = [
                (c.action, c.state, c.zone.dbm) for c in children.get(n.index, [])
            ]
            if [(a, s, z.dbm) for a, s, z in recomputed] != recorded:
                problems.append(f"children of node {n.index} do not match its successors")

    if result.retro_cover:
        by_state: dict[StateVector, list[SearchNode]] = {}
        for n in result.nodes:
            if not n.covered:
                by_state.setdefault(n.state, []).append(n)
        for group in by_state.values():
            for a in group:
                for b in group:
                    if a is not b and a.proj is not None and sem.covers(b, a.proj):
                        problems.append(
                            f"stored nodes {a.index} and {b.index} are not an antichain"
                        )
    return problems
