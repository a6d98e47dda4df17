import pytest

from lzg.model import (
    Atom,
    MaxConstants,
    ModelSyntaxError,
    ModelValidationError,
    ParseError,
    enabled_sync_sets,
    max_constants,
    parse_network,
    parse_target,
    render_network,
)
from nets import GUARD_ORDER_SRC, MISSED_SYNC_SRC, TWO_RESETS_SRC, guard_order, missed_sync, two_resets


# ----------------------------------------------------------------- parsing


def test_parse_two_process_network():
    net = two_resets()
    assert net.name == "two_resets"
    assert [p.name for p in net.processes] == ["P1", "P2"]
    assert net.initial_state == ("p0", "q0")
    assert net.clocks == ("x", "y")
    assert net.clock_owner == {"x": "P1", "y": "P2"}
    assert net.actions == ("a", "b")
    assert net.dom == {"a": ("P1",), "b": ("P2",)}
    (t,) = net.processes[0].transitions
    assert (t.src, t.tgt, t.action, t.guard, t.resets) == ("p0", "p1", "a", (), ("x",))


def test_parse_guards_and_shared_actions():
    net = missed_sync()
    assert net.dom["c"] == ("A1", "A2")
    t_b2 = net.processes[1].transitions[1]
    assert t_b2.guard == (Atom("z", "==", 3),)
    assert t_b2.resets == ("z",)


def test_all_guard_operators_parse():
    src = TWO_RESETS_SRC + "trans P1 p1 p1 g guard{x<1&&x<=2&&x==3&&x>=4&&x>5}\n"
    net = parse_network(src)
    tr = net.processes[0].transitions[-1]
    assert [a.op for a in tr.guard] == ["<", "<=", "==", ">=", ">"]
    assert [a.const for a in tr.guard] == [1, 2, 3, 4, 5]


def test_comments_and_blank_lines_ignored():
    src = "# header\n\nsystem s\n process P  # trailing\nstate P s0 initial\n"
    net = parse_network(src)
    assert net.name == "s" and net.processes[0].states == ("s0",)


def test_round_trip_through_renderer():
    for src in (TWO_RESETS_SRC, MISSED_SYNC_SRC, GUARD_ORDER_SRC):
        net = parse_network(src)
        again = parse_network(render_network(net))
        assert render_network(again) == render_network(net)


@pytest.mark.parametrize(
    "src, kind, line, fragment",
    [
        ("systm foo\n", ModelSyntaxError, 1, "unknown directive"),
        ("system s\nprocess P\nstate P a initial\ntrans P a b go\n", ModelValidationError, 4, "not declared"),
        ("system s\nclock P x\n", ModelValidationError, 2, "undeclared process"),
        ("system s\nprocess P\nstate P a initial\nstate P a\n", ModelValidationError, 4, "duplicate state"),
        ("system s\nprocess P\nprocess Q\nstate P a initial\nclock Q y\ntrans P a a t guard{y<1}\n", ModelValidationError, 6, "not owned by"),
        ("system s\nprocess P\nstate P a initial\ntrans P a a t guard{x<}\n", ModelSyntaxError, 4, "bad guard atom"),
        ("system s\nprocess P\nstate P a\n", ModelValidationError, 2, "no initial state"),
        ("system s\nprocess P\nstate P a initial\nstate P b initial\n", ModelValidationError, 4, "several initial"),
        ("process P\nstate P a initial\n", ModelValidationError, 1, "missing system"),
        ("system s\nprocess P\nstate P a initial\ntrans P a a t reset{z}\n", ModelValidationError, 4, "undeclared clock"),
        ("system s\nprocess P\nclock P x\nstate P a initial\ntrans P a a t reset{x} guard{x<1}\n", ModelSyntaxError, 5, "guard{...} must appear once, before"),
        ("system s\nprocess P\nstate P a initial\ntrans P a a t nonsense\n", ModelSyntaxError, 4, "unexpected token"),
    ],
)
def test_errors_report_kind_line_and_message(src, kind, line, fragment):
    with pytest.raises(kind) as exc:
        parse_network(src)
    assert exc.value.line == line
    assert fragment in exc.value.message
    assert isinstance(exc.value, ParseError)


def test_error_columns_point_at_offending_token():
    with pytest.raises(ModelValidationError) as exc:
        parse_network("system s\nclock Missing x\n")
    assert (exc.value.line, exc.value.col) == (2, 7)


# ----------------------------------------------------------- max constants


def test_max_constants_across_processes():
    m = max_constants(missed_sync())
    assert m.of("x") == 2
    assert m.of("z") == 3
    assert m.of("y") is None  # never compared: conceptually minus infinity
    assert m.cmax == 3


def test_max_constants_guardless_network():
    m = max_constants(two_resets())
    assert m.per_clock == {}
    assert m.of("x") is None and m.of("y") is None
    assert m.cmax is None


def test_max_constants_takes_maximum_per_clock():
    src = TWO_RESETS_SRC + "trans P1 p1 p1 g guard{x>=1&&x<4}\n"
    assert max_constants(parse_network(src)).of("x") == 4


# ------------------------------------------------------- synchronization


def test_sync_sets_single_owner():
    net = two_resets()
    combos = enabled_sync_sets(net, ("p0", "q0"), "a")
    assert len(combos) == 1 and combos[0][0].action == "a"
    assert enabled_sync_sets(net, ("p1", "q0"), "a") == []


def test_sync_sets_shared_action_requires_all_owners():
    net = missed_sync()
    assert enabled_sync_sets(net, ("p0", "q0"), "c") == []
    assert enabled_sync_sets(net, ("p1", "q2"), "c") != []


def test_sync_sets_cartesian_product():
    src = """\
system s
process P
state P a initial
state P b
trans P a b go
trans P a b go
process Q
state Q u initial
state Q v
trans Q u v go
trans Q u v go
trans Q u v go
"""
    net = parse_network(src)
    combos = enabled_sync_sets(net, ("a", "u"), "go")
    assert len(combos) == 6  # 2 x 3 choices, declaration order
    assert all(len(c) == 2 for c in combos)


def test_sync_sets_unknown_action():
    with pytest.raises(ValueError):
        enabled_sync_sets(two_resets(), ("p0", "q0"), "zap")


# ----------------------------------------------------------------- targets


def test_parse_target_partial_and_full():
    net = missed_sync()
    t = parse_target(net, "A1=p2")
    assert t.matches(net, ("p2", "q0")) and not t.matches(net, ("p1", "q3"))
    both = parse_target(net, "A1=p2,A2=q3")
    assert both.matches(net, ("p2", "q3")) and not both.matches(net, ("p2", "q2"))


@pytest.mark.parametrize(
    "text", ["", "A1", "Zed=p2", "A1=nope", "A1=p2,A1=p1"]
)
def test_parse_target_rejects_bad_specs(text):
    with pytest.raises(ValueError):
        parse_target(missed_sync(), text)
