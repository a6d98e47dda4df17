"""Zone representations for networks of timed automata.

All zones are stored in *offset* form: instead of tracking the current
value of a clock ``x``, the DBM tracks the timestamp ``x~`` of its last
reset.  The value of ``x`` is recovered as ``t - x~`` where ``t`` is the
relevant reference time.  Three flavours of zone appear:

``LocalZone``
    One reference time ``t_P`` per process, plus one offset variable per
    clock.  Processes may be at different local times, which is what lets
    independent parts of the network be explored without interleaving.

``GlobalZone``
    A single shared reference time ``t`` plus the clock offsets.

``ClockZone``
    Plain clock values (no reference variable).  This is the projection
    used for subsumption checks and extrapolation, since offsets grow
    without bound while clock values do not.

The conversions between the three forms, the guard/reset/elapse
operations, and the ``extra_m`` extrapolation live here.  Engines in
:mod:`lzg.explore` compose them into search algorithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .dbm import (
    INF,
    LE_ZERO,
    Dbm,
    VariableLayout,
    assign,
    bound,
    canonicalize,
    constrain_all,
    free_upper,
    includes,
    universe,
)
from .model import Atom, MaxConstants, Network

__all__ = [
    "NetVars",
    "LocalZone",
    "GlobalZone",
    "ClockZone",
    "initial_local_zone",
    "initial_global_zone",
    "local_elapse",
    "global_elapse",
    "guard_constraints_local",
    "guard_constraints_global",
    "constrain_local",
    "constrain_global",
    "apply_resets_local",
    "apply_resets_global",
    "sync",
    "sync_constraints",
    "global_of_sync",
    "local_of_global",
    "to_clock_zone",
    "extra_m",
    "sync_subsume",
    "clock_subsume",
    "universe_local",
]


class NetVars:
    """Variable layouts for one network, shared by all its zones.

    Local layout:  ``0, t_<proc>..., <clock>~...``
    Global layout: ``0, t, <clock>~...``
    Clock layout:  ``0, <clock>...``
    """

    __slots__ = (
        "net",
        "local_layout",
        "global_layout",
        "clock_layout",
        "ref",
        "loff",
        "goff",
        "cvar",
        "owner_ref",
    )

    def __init__(self, net: Network) -> None:
        procs = tuple(p.name for p in net.processes)
        clocks = net.clocks
        self.net = net
        self.local_layout = VariableLayout(
            ("0",)
            + tuple(f"t_{p}" for p in procs)
            + tuple(f"{c}~" for c in clocks)
        )
        self.global_layout = VariableLayout(
            ("0", "t") + tuple(f"{c}~" for c in clocks)
        )
        self.clock_layout = VariableLayout(("0",) + clocks)
        k = len(procs)
        self.ref = {p: 1 + i for i, p in enumerate(procs)}
        self.loff = {c: 1 + k + i for i, c in enumerate(clocks)}
        self.goff = {c: 2 + i for i, c in enumerate(clocks)}
        self.cvar = {c: 1 + i for i, c in enumerate(clocks)}
        self.owner_ref = {c: self.ref[net.clock_owner[c]] for c in clocks}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NetVars):
            return NotImplemented
        return self.local_layout == other.local_layout

    def __hash__(self) -> int:
        return hash(self.local_layout)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"NetVars(local={self.local_layout.names})"


@dataclass(frozen=True)
class LocalZone:
    """A zone over per-process reference times and clock offsets."""

    vars: NetVars
    dbm: Dbm

    def __str__(self) -> str:
        from .dbm import constraint_strings

        return " ".join(constraint_strings(self.dbm)) or "true"


@dataclass(frozen=True)
class GlobalZone:
    """A zone over one shared reference time and clock offsets."""

    vars: NetVars
    dbm: Dbm

    def __str__(self) -> str:
        from .dbm import constraint_strings

        return " ".join(constraint_strings(self.dbm)) or "true"


@dataclass(frozen=True)
class ClockZone:
    """A zone over plain clock values."""

    vars: NetVars
    dbm: Dbm

    def __str__(self) -> str:
        from .dbm import constraint_strings

        return " ".join(constraint_strings(self.dbm)) or "true"


def _zero_point(layout: VariableLayout) -> Dbm:
    n = len(layout.names)
    m = np.full((n, n), LE_ZERO, dtype=np.int64)
    d = canonicalize(Dbm(layout, m))
    assert d is not None
    return d


def initial_local_zone(nv: NetVars) -> LocalZone:
    """All variables zero, then local time elapse in every process."""
    return local_elapse(LocalZone(nv, _zero_point(nv.local_layout)))


def initial_global_zone(nv: NetVars) -> GlobalZone:
    """All variables zero, then global time elapse."""
    return global_elapse(GlobalZone(nv, _zero_point(nv.global_layout)))


def local_elapse(z: LocalZone) -> LocalZone:
    """Let every process reference time grow independently."""
    d = z.dbm
    for r in z.vars.ref.values():
        d = free_upper(d, r)
    return LocalZone(z.vars, d) if d is not z.dbm else z


def global_elapse(z: GlobalZone) -> GlobalZone:
    """Let the shared reference time grow."""
    d = free_upper(z.dbm, 1)
    return GlobalZone(z.vars, d) if d is not z.dbm else z


def _atom_constraints(
    atom: Atom, ref: int, off: int
) -> list[tuple[int, int, int]]:
    # The clock value is ref - off, so "x <= c" is ref - off <= c, i.e. an
    # upper bound on entry (ref, off); "x >= c" bounds entry (off, ref).
    c = atom.const
    if atom.op == "<":
        return [(ref, off, bound(c, strict=True))]
    if atom.op == "<=":
        return [(ref, off, bound(c))]
    if atom.op == "==":
        return [(ref, off, bound(c)), (off, ref, bound(-c))]
    if atom.op == ">=":
        return [(off, ref, bound(-c))]
    if atom.op == ">":
        return [(off, ref, bound(-c, strict=True))]
    raise AssertionError(f"unknown operator {atom.op!r}")


def guard_constraints_local(
    nv: NetVars, guard: Iterable[Atom]
) -> list[tuple[int, int, int]]:
    """DBM constraints for a guard over local-zone variables."""
    out: list[tuple[int, int, int]] = []
    for atom in guard:
        out.extend(
            _atom_constraints(atom, nv.owner_ref[atom.clock], nv.loff[atom.clock])
        )
    return out


def guard_constraints_global(
    nv: NetVars, guard: Iterable[Atom]
) -> list[tuple[int, int, int]]:
    """DBM constraints for a guard over global-zone variables."""
    out: list[tuple[int, int, int]] = []
    for atom in guard:
        out.extend(_atom_constraints(atom, 1, nv.goff[atom.clock]))
    return out


def constrain_local(
    z: LocalZone, constraints: Iterable[tuple[int, int, int]]
) -> Optional[LocalZone]:
    d = constrain_all(z.dbm, constraints)
    if d is None:
        return None
    return z if d is z.dbm else LocalZone(z.vars, d)


def constrain_global(
    z: GlobalZone, constraints: Iterable[tuple[int, int, int]]
) -> Optional[GlobalZone]:
    d = constrain_all(z.dbm, constraints)
    if d is None:
        return None
    return z if d is z.dbm else GlobalZone(z.vars, d)


def apply_resets_local(z: LocalZone, clocks: Iterable[str]) -> LocalZone:
    """Reset clocks by assigning each offset to its owner's reference time."""
    d = z.dbm
    for x in clocks:
        d = assign(d, z.vars.loff[x], z.vars.owner_ref[x])
    return LocalZone(z.vars, d) if d is not z.dbm else z


def apply_resets_global(z: GlobalZone, clocks: Iterable[str]) -> GlobalZone:
    """Reset clocks by assigning each offset to the shared reference time."""
    d = z.dbm
    for x in clocks:
        d = assign(d, z.vars.goff[x], 1)
    return GlobalZone(z.vars, d) if d is not z.dbm else z


def sync_constraints(
    nv: NetVars, procs: Optional[Iterable[str]] = None
) -> list[tuple[int, int, int]]:
    """Equality constraints between the reference times of ``procs``.

    With ``procs=None`` all processes are synchronized; passing the domain
    of an action gives the partial synchronization an action step needs.
    """
    if procs is None:
        refs = list(nv.ref.values())
    else:
        refs = [nv.ref[p] for p in procs]
    out: list[tuple[int, int, int]] = []
    for a, b in zip(refs, refs[1:]):
        out.append((a, b, LE_ZERO))
        out.append((b, a, LE_ZERO))
    return out


def sync(
    z: LocalZone, procs: Optional[Iterable[str]] = None
) -> Optional[LocalZone]:
    """Restrict a local zone to valuations where reference times agree.

    By default all of them must agree; a subset restricts only those.
    Returns ``None`` when no common time exists (a fully unsynchronizable
    zone is unobservable globally).
    """
    cons = sync_constraints(z.vars, procs)
    if not cons:
        return z
    return constrain_local(z, cons)


def _collapse_synced(nv: NetVars, d: Dbm) -> GlobalZone:
    # Keep variable 0, one representative reference time and all offsets.
    # A submatrix of a canonical DBM is canonical, and in a synced zone all
    # reference rows/columns are identical, so any representative works.
    first_ref = next(iter(nv.ref.values()))
    sel = [0, first_ref] + [nv.loff[c] for c in nv.net.clocks]
    sub = np.ascontiguousarray(d.entries[np.ix_(sel, sel)])
    return GlobalZone(nv, Dbm(nv.global_layout, sub))


def global_of_sync(z: LocalZone) -> Optional[GlobalZone]:
    """Synchronize reference times and merge them into a single ``t``."""
    s = sync(z)
    if s is None:
        return None
    return _collapse_synced(z.vars, s.dbm)


def local_of_global(z: GlobalZone) -> LocalZone:
    """Duplicate the shared reference time into one copy per process."""
    nv = z.vars
    g = z.dbm.entries
    names = nv.local_layout.names
    n = len(names)
    m = np.full((n, n), INF, dtype=np.int64)
    refs = list(nv.ref.values())
    # Index of each local variable in the global layout (refs all map to t).
    gidx = [0] + [1] * len(refs) + [nv.goff[c] for c in nv.net.clocks]
    for i in range(n):
        for j in range(n):
            m[i, j] = g[gidx[i], gidx[j]]
    d = canonicalize(Dbm(nv.local_layout, m))
    assert d is not None, "copying a non-empty zone cannot make it empty"
    return LocalZone(nv, d)


def to_clock_zone(z: GlobalZone) -> ClockZone:
    """Project a global offset zone onto plain clock values.

    With ``x = t - x~`` every difference ``x - y`` equals ``y~ - x~`` and
    every value ``x`` equals ``t - x~``, so the projection is a transposed
    submatrix plus the ``t`` row/column, and needs no re-closure.
    """
    nv = z.vars
    g = z.dbm.entries
    clocks = nv.net.clocks
    sel = [nv.goff[c] for c in clocks]
    n = len(clocks) + 1
    m = np.full((n, n), LE_ZERO, dtype=np.int64)
    if clocks:
        m[1:, 1:] = g[np.ix_(sel, sel)].T
        m[1:, 0] = g[1, sel]
        m[0, 1:] = g[sel, 1]
    return ClockZone(nv, Dbm(nv.clock_layout, np.ascontiguousarray(m)))


def extra_m(z: ClockZone, consts: MaxConstants) -> ClockZone:
    """Classic maximum-constant extrapolation of a clock zone.

    Upper bounds larger than the clock's maximum constant are dropped and
    lower bounds smaller than ``-max`` are relaxed to ``> max``.  Clocks
    that are never compared to a constant use threshold 0, which removes
    every bound on them.  The result is re-canonicalized; the operation is
    idempotent.
    """
    nv = z.vars
    clocks = nv.net.clocks
    if not clocks:
        return z
    eff = [max(consts.of(c) or 0, 0) for c in clocks]
    m = z.dbm.mutable_copy()
    changed = False
    n = len(clocks) + 1
    for i in range(n):
        hi = bound(eff[i - 1]) if i else None
        for j in range(n):
            if i == j:
                continue
            e = m[i, j]
            if hi is not None and e > hi and e != INF:
                m[i, j] = INF
                changed = True
            elif j and e < bound(-eff[j - 1], strict=True):
                m[i, j] = bound(-eff[j - 1], strict=True)
                changed = True
    if not changed:
        return z
    d = canonicalize(Dbm(nv.clock_layout, m))
    assert d is not None, "extrapolation only grows the zone"
    if d == z.dbm:
        # Re-closing can re-derive every widened bound through entries that
        # sit below their thresholds; detect that and keep the old object.
        return z
    return ClockZone(nv, d)


def clock_subsume(
    cand: ClockZone, est: ClockZone, consts: MaxConstants
) -> bool:
    """Is ``cand`` contained in the extrapolation of ``est``?"""
    return includes(extra_m(est, consts).dbm, cand.dbm)


def sync_subsume(
    cand: LocalZone, est: LocalZone, consts: MaxConstants
) -> bool:
    """Subsumption for local zones, compared through their synced parts.

    Only the synchronizable part of a local zone is observable globally,
    so a candidate whose synced part is empty is covered by anything, and
    an established zone with an empty synced part covers nothing.
    """
    gc = global_of_sync(cand)
    if gc is None:
        return True
    ge = global_of_sync(est)
    if ge is None:
        return False
    return clock_subsume(to_clock_zone(gc), to_clock_zone(ge), consts)


def universe_local(nv: NetVars) -> LocalZone:
    """Unconstrained local zone (every variable nonnegative)."""
    n = len(nv.local_layout.names)
    cons = [(0, i, LE_ZERO) for i in range(1, n)]
    d = constrain_all(universe(nv.local_layout), cons)
    assert d is not None
    return LocalZone(nv, d)
