"""Networks of timed automata and their textual input language.

A network is a set of processes, each owning disjoint state and clock
sets; an action shared by several processes synchronizes one transition
of every owner.  Guards are conjunctions of comparisons of an owned
clock against a natural constant.

Input language (line oriented, UTF-8, ``#`` starts a comment):

    system <id>
    process <id>
    clock <procid> <id>
    state <procid> <id> [initial]
    trans <procid> <src> <tgt> <action> [guard{<atom>(&&<atom>)*}] [reset{<clock>(,<clock>)*}]

with atoms ``<clock><op><nat>`` and ``<op>`` one of ``< <= == >= >``.
Syntax problems and semantic problems (unknown states, foreign clocks,
missing initial states, ...) are reported as distinct error kinds, both
carrying line/column positions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

OPS = ("<", "<=", "==", ">=", ">")

_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ATOM = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(<=|>=|==|<|>)(\d+)")


class ParseError(Exception):
    """Problem in a model source; ``line``/``col`` are 1-based."""

    kind = "error"

    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class ModelSyntaxError(ParseError):
    kind = "syntax"


class ModelValidationError(ParseError):
    kind = "validation"


@dataclass(frozen=True)
class Atom:
    clock: str
    op: str  # one of OPS
    const: int

    def __str__(self) -> str:
        return f"{self.clock}{self.op}{self.const}"


Guard = tuple[Atom, ...]


@dataclass(frozen=True)
class Transition:
    proc: str
    src: str
    tgt: str
    action: str
    guard: Guard = ()
    resets: tuple[str, ...] = ()


@dataclass(frozen=True)
class Process:
    name: str
    states: tuple[str, ...]
    initial: str
    clocks: tuple[str, ...]
    transitions: tuple[Transition, ...]


StateVector = tuple[str, ...]


@dataclass(frozen=True)
class TargetSpec:
    """Partial map process -> state; missing processes are unconstrained."""

    wanted: tuple[tuple[str, str], ...]

    def matches(self, net: "Network", q: StateVector) -> bool:
        return all(q[net.proc_index[p]] == s for p, s in self.wanted)

    def __str__(self) -> str:
        return ",".join(f"{p}={s}" for p, s in self.wanted)


class Network:
    """A parsed and validated network with derived lookup tables."""

    def __init__(self, name: str, processes: Iterable[Process]):
        self.name = name
        self.processes: tuple[Process, ...] = tuple(processes)
        self.proc_index = {p.name: i for i, p in enumerate(self.processes)}
        self.clocks: tuple[str, ...] = tuple(
            c for p in self.processes for c in p.clocks
        )
        self.clock_owner = {c: p.name for p in self.processes for c in p.clocks}
        actions: list[str] = []
        dom: dict[str, list[str]] = {}
        for p in self.processes:
            for t in p.transitions:
                if t.action not in dom:
                    actions.append(t.action)
                    dom[t.action] = []
                if p.name not in dom[t.action]:
                    dom[t.action].append(p.name)
        self.actions: tuple[str, ...] = tuple(actions)
        # owners in process order: a synchronization picks one transition per owner
        self.dom = {
            a: tuple(sorted(ps, key=lambda n: self.proc_index[n]))
            for a, ps in dom.items()
        }
        self._by_state_action: dict[tuple[str, str, str], tuple[Transition, ...]] = {}
        for p in self.processes:
            for t in p.transitions:
                key = (p.name, t.src, t.action)
                self._by_state_action[key] = self._by_state_action.get(key, ()) + (t,)

    @property
    def initial_state(self) -> StateVector:
        return tuple(p.initial for p in self.processes)

    def transitions_from(self, proc: str, state: str, action: str) -> tuple[Transition, ...]:
        return self._by_state_action.get((proc, state, action), ())

    def __repr__(self) -> str:
        return f"Network({self.name!r}, {len(self.processes)} processes)"


@dataclass(frozen=True)
class MaxConstants:
    """Largest guard constant per clock; clocks never compared have none.

    ``of()`` returns ``None`` for such clocks (conceptually minus
    infinity: any abstraction of an unread clock is sound).
    """

    per_clock: dict[str, int] = field(default_factory=dict)

    def of(self, clock: str) -> Optional[int]:
        return self.per_clock.get(clock)

    @property
    def cmax(self) -> Optional[int]:
        return max(self.per_clock.values(), default=None)


def max_constants(net: Network) -> MaxConstants:
    per: dict[str, int] = {}
    for p in net.processes:
        for t in p.transitions:
            for atom in t.guard:
                prev = per.get(atom.clock)
                per[atom.clock] = atom.const if prev is None else max(prev, atom.const)
    return MaxConstants(per)


def enabled_sync_sets(
    net: Network, q: StateVector, action: str
) -> list[tuple[Transition, ...]]:
    """All synchronization choices for ``action`` at state vector ``q``.

    One transition per owning process, Cartesian across owners, in
    declaration order; empty if any owner has no matching transition.
    """
    if action not in net.dom:
        raise ValueError(f"unknown action {action!r}")
    pools = [
        net.transitions_from(p, q[net.proc_index[p]], action) for p in net.dom[action]
    ]
    combos: list[tuple[Transition, ...]] = [()]
    for pool in pools:
        if not pool:
            return []
        combos = [c + (t,) for c in combos for t in pool]
    return combos


def parse_target(net: Network, text: str) -> TargetSpec:
    """Parse ``proc=state[,proc=state...]`` against a network."""
    wanted = []
    seen = set()
    for part in text.split(","):
        part = part.strip()
        if not part or "=" not in part:
            raise ValueError(f"bad target component {part!r}; expected proc=state")
        pname, _, sname = part.partition("=")
        pname, sname = pname.strip(), sname.strip()
        if pname not in net.proc_index:
            raise ValueError(f"target names unknown process {pname!r}")
        proc = net.processes[net.proc_index[pname]]
        if sname not in proc.states:
            raise ValueError(f"process {pname!r} has no state {sname!r}")
        if pname in seen:
            raise ValueError(f"process {pname!r} appears twice in target")
        seen.add(pname)
        wanted.append((pname, sname))
    return TargetSpec(tuple(wanted))


# ------------------------------------------------------------------ parser


class _Tok:
    __slots__ = ("text", "line", "col")

    def __init__(self, text: str, line: int, col: int):
        self.text = text
        self.line = line
        self.col = col


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    body = line.split("#", 1)[0]
    return [
        _Tok(m.group(0), lineno, m.start() + 1) for m in re.finditer(r"\S+", body)
    ]


def _check_id(tok: _Tok, what: str) -> str:
    if not _ID.fullmatch(tok.text):
        raise ModelSyntaxError(f"invalid {what} {tok.text!r}", tok.line, tok.col)
    return tok.text


class _ProcDraft:
    def __init__(self, name: str, line: int):
        self.name = name
        self.line = line
        self.states: list[str] = []
        self.initial: Optional[str] = None
        self.clocks: list[str] = []
        self.transitions: list[Transition] = []


def parse_network(text: str, filename: str = "<input>") -> Network:
    """Parse and validate a network; raises :class:`ParseError` subclasses."""
    system_name: Optional[str] = None
    procs: dict[str, _ProcDraft] = {}
    order: list[str] = []
    state_owner: dict[str, str] = {}
    clock_owner: dict[str, str] = {}

    def proc_of(tok: _Tok) -> _ProcDraft:
        if tok.text not in procs:
            raise ModelValidationError(
                f"undeclared process {tok.text!r}", tok.line, tok.col
            )
        return procs[tok.text]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokenize(raw, lineno)
        if not toks:
            continue
        head, args = toks[0], toks[1:]

        if head.text == "system":
            _expect_count(args, 1, head)
            if system_name is not None:
                raise ModelValidationError("duplicate system line", lineno, head.col)
            system_name = _check_id(args[0], "system name")

        elif head.text == "process":
            _expect_count(args, 1, head)
            name = _check_id(args[0], "process name")
            if name in procs:
                raise ModelValidationError(
                    f"duplicate process {name!r}", lineno, args[0].col
                )
            procs[name] = _ProcDraft(name, lineno)
            order.append(name)

        elif head.text == "clock":
            _expect_count(args, 2, head)
            p = proc_of(args[0])
            name = _check_id(args[1], "clock name")
            if name in clock_owner:
                raise ModelValidationError(
                    f"duplicate clock {name!r}", lineno, args[1].col
                )
            clock_owner[name] = p.name
            p.clocks.append(name)

        elif head.text == "state":
            if len(args) not in (2, 3):
                raise ModelSyntaxError(
                    "expected: state <procid> <id> [initial]", lineno, head.col
                )
            p = proc_of(args[0])
            name = _check_id(args[1], "state name")
            if name in state_owner:
                raise ModelValidationError(
                    f"duplicate state {name!r}", lineno, args[1].col
                )
            state_owner[name] = p.name
            p.states.append(name)
            if len(args) == 3:
                if args[2].text != "initial":
                    raise ModelSyntaxError(
                        f"unexpected token {args[2].text!r}", lineno, args[2].col
                    )
                if p.initial is not None:
                    raise ModelValidationError(
                        f"process {p.name!r} has several initial states",
                        lineno,
                        args[2].col,
                    )
                p.initial = name

        elif head.text == "trans":
            if len(args) < 4 or len(args) > 6:
                raise ModelSyntaxError(
                    "expected: trans <procid> <src> <tgt> <action>"
                    " [guard{...}] [reset{...}]",
                    lineno,
                    head.col,
                )
            p = proc_of(args[0])
            src, tgt = args[1], args[2]
            action = _check_id(args[3], "action name")
            for s in (src, tgt):
                if s.text not in state_owner or state_owner[s.text] != p.name:
                    raise ModelValidationError(
                        f"state {s.text!r} not declared in process {p.name!r}",
                        lineno,
                        s.col,
                    )
            guard: Guard = ()
            resets: tuple[str, ...] = ()
            seen_guard = seen_reset = False
            for extra in args[4:]:
                if extra.text.startswith("guard{") and extra.text.endswith("}"):
                    if seen_guard or seen_reset:
                        raise ModelSyntaxError(
                            "guard{...} must appear once, before reset{...}",
                            lineno,
                            extra.col,
                        )
                    seen_guard = True
                    guard = _parse_guard(extra, p, clock_owner)
                elif extra.text.startswith("reset{") and extra.text.endswith("}"):
                    if seen_reset:
                        raise ModelSyntaxError(
                            "reset{...} must appear once", lineno, extra.col
                        )
                    seen_reset = True
                    resets = _parse_resets(extra, p, clock_owner)
                else:
                    raise ModelSyntaxError(
                        f"unexpected token {extra.text!r}", lineno, extra.col
                    )
            p.transitions.append(
                Transition(p.name, src.text, tgt.text, action, guard, resets)
            )

        else:
            raise ModelSyntaxError(
                f"unknown directive {head.text!r}", lineno, head.col
            )

    if system_name is None:
        raise ModelValidationError("missing system line", 1)
    if not order:
        raise ModelValidationError("system declares no process", 1)
    for name in order:
        draft = procs[name]
        if not draft.states:
            raise ModelValidationError(
                f"process {name!r} declares no state", draft.line
            )
        if draft.initial is None:
            raise ModelValidationError(
                f"process {name!r} has no initial state", draft.line
            )

    return Network(
        system_name,
        [
            Process(
                d.name,
                tuple(d.states),
                d.initial,  # type: ignore[arg-type]
                tuple(d.clocks),
                tuple(d.transitions),
            )
            for d in (procs[n] for n in order)
        ],
    )


def _expect_count(args: list[_Tok], n: int, head: _Tok) -> None:
    if len(args) != n:
        raise ModelSyntaxError(
            f"directive {head.text!r} expects {n} argument(s)", head.line, head.col
        )


def _parse_guard(tok: _Tok, p: _ProcDraft, clock_owner: dict[str, str]) -> Guard:
    inner = tok.text[len("guard{") : -1]
    if not inner:
        raise ModelSyntaxError("empty guard{}", tok.line, tok.col)
    atoms = []
    for piece in inner.split("&&"):
        m = _ATOM.fullmatch(piece)
        if not m:
            raise ModelSyntaxError(f"bad guard atom {piece!r}", tok.line, tok.col)
        clock, op, const = m.group(1), m.group(2), int(m.group(3))
        _check_clock(clock, p, clock_owner, tok)
        atoms.append(Atom(clock, op, const))
    return tuple(atoms)


def _parse_resets(
    tok: _Tok, p: _ProcDraft, clock_owner: dict[str, str]
) -> tuple[str, ...]:
    inner = tok.text[len("reset{") : -1]
    if not inner:
        raise ModelSyntaxError("empty reset{}", tok.line, tok.col)
    clocks = []
    for name in inner.split(","):
        if not _ID.fullmatch(name):
            raise ModelSyntaxError(f"bad reset clock {name!r}", tok.line, tok.col)
        _check_clock(name, p, clock_owner, tok)
        if name in clocks:
            raise ModelValidationError(
                f"clock {name!r} reset twice in one transition", tok.line, tok.col
            )
        clocks.append(name)
    return tuple(clocks)


def _check_clock(
    name: str, p: _ProcDraft, clock_owner: dict[str, str], tok: _Tok
) -> None:
    owner = clock_owner.get(name)
    if owner is None:
        raise ModelValidationError(f"undeclared clock {name!r}", tok.line, tok.col)
    if owner != p.name:
        raise ModelValidationError(
            f"clock {name!r} not owned by process {p.name!r}", tok.line, tok.col
        )


# ------------------------------------------------------------ pretty print


def render_network(net: Network) -> str:
    """Emit a network back in the input language (parse round-trips)."""
    out = [f"system {net.name}"]
    for p in net.processes:
        out.append(f"process {p.name}")
        for c in p.clocks:
            out.append(f"clock {p.name} {c}")
        for s in p.states:
            suffix = " initial" if s == p.initial else ""
            out.append(f"state {p.name} {s}{suffix}")
        for t in p.transitions:
            line = f"trans {p.name} {t.src} {t.tgt} {t.action}"
            if t.guard:
                line += " guard{" + "&&".join(map(str, t.guard)) + "}"
            if t.resets:
                line += " reset{" + ",".join(t.resets) + "}"
            out.append(line)
    return "\n".join(out) + "\n"
