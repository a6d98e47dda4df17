"""Tests for the rational-arithmetic oracle and its cross-checks.

The central tests here play the zone layer against the independent
solver: for every short action word of a net, the zone pipeline must
call the word feasible exactly when the solver finds concrete times.
"""

from __future__ import annotations

import itertools
from fractions import Fraction as F
from random import Random

import pytest

from lzg import oracle as O
from lzg import zones as Z
from lzg.explore import explore_global, explore_local
from lzg.model import MaxConstants, enabled_sync_sets, max_constants

from nets import guard_order, missed_sync, two_resets


def _advance(net, state, combo):
    out = list(state)
    for tr in combo:
        out[net.proc_index[tr.proc]] = tr.tgt
    return tuple(out)


def all_words(net, max_len):
    """Every action word realizable in the control graph (guards ignored)."""
    out = set()

    def rec(state, word):
        if word:
            out.add(tuple(word))
        if len(word) == max_len:
            return
        for action in net.actions:
            for combo in enabled_sync_sets(net, state, action):
                rec(_advance(net, state, combo), word + [action])

    rec(net.initial_state, [])
    return sorted(out)


def global_zone_of(net, nv, word):
    zone = Z.initial_global_zone(nv)
    state = net.initial_state
    for action in word:
        combos = enabled_sync_sets(net, state, action)
        if not combos:
            return None
        combo = combos[0]
        cons = []
        resets = []
        for tr in combo:
            cons.extend(Z.guard_constraints_global(nv, tr.guard))
            resets.extend(tr.resets)
        zone = Z.constrain_global(zone, cons)
        if zone is None:
            return None
        zone = Z.global_elapse(Z.apply_resets_global(zone, resets))
        state = _advance(net, state, combo)
    return zone


def local_zone_of(net, nv, word):
    zone = Z.initial_local_zone(nv)
    state = net.initial_state
    for action in word:
        combos = enabled_sync_sets(net, state, action)
        if not combos:
            return None
        combo = combos[0]
        cons = Z.sync_constraints(nv, net.dom[action])
        resets = []
        for tr in combo:
            cons.extend(Z.guard_constraints_local(nv, tr.guard))
            resets.extend(tr.resets)
        zone = Z.constrain_local(zone, cons)
        if zone is None:
            return None
        zone = Z.local_elapse(Z.apply_resets_local(zone, resets))
        state = _advance(net, state, combo)
    return zone


# --------------------------------------------------------------------------
# The difference-constraint solver


def test_solver_simple_chain():
    # 0 <= t1 <= t2, t2 - t1 <= 3, t1 >= 2
    cons = [(0, 1, 0, False), (1, 2, 0, False), (2, 1, 3, False), (0, 1, -2, False)]
    times = O._solve(2, cons)
    assert times is not None
    t1, t2 = times
    assert t1 >= 2 and t1 <= t2 <= t1 + 3


def test_solver_detects_contradiction():
    cons = [(1, 0, 2, False), (0, 1, -3, False)]  # t1 <= 2 and t1 >= 3
    assert O._solve(1, cons) is None


def test_solver_strict_cycle_is_empty():
    cons = [(1, 2, 0, True), (2, 1, 0, False)]  # t1 < t2 <= t1
    assert O._solve(2, cons) is None


def test_solver_strict_interval_produces_interior_point():
    cons = [(0, 1, -1, True), (1, 0, 2, True)]  # 1 < t1 < 2
    times = O._solve(1, cons)
    assert times is not None and 1 < times[0] < 2


def test_solver_solution_satisfies_all_constraints():
    rng = Random(9)
    for _ in range(200):
        n = rng.randint(1, 4)
        cons = []
        for _ in range(rng.randint(0, 8)):
            i, j = rng.randrange(n + 1), rng.randrange(n + 1)
            if i == j:
                continue
            cons.append((i, j, rng.randint(-4, 6), rng.random() < 0.3))
        times = O._solve(n, cons)
        if times is None:
            continue
        full = [F(0)] + list(times)
        for a, b, c, strict in cons:
            diff = full[a] - full[b]
            assert diff < c if strict else diff <= c


# --------------------------------------------------------------------------
# Concrete executions


def test_exec_global_frozen_run():
    net = missed_sync()
    run = [("b1", F(2)), ("a1", F(2)), ("b2", F(5))]
    assert O.exec_global(net, run) == {("p1", "q2")}


def test_exec_global_requires_monotone_times():
    net = missed_sync()
    run = [("b1", F(2)), ("b2", F(5)), ("a1", F(2))]
    assert O.exec_global(net, run) == set()
    # ...but per-process lines accept the same run locally.
    assert O.exec_local(net, run) == {("p1", "q2")}


def test_exec_rejects_guard_violation():
    net = missed_sync()
    assert O.exec_global(net, [("b1", F(3))]) == set()
    assert O.exec_global(net, [("b1", F(2))]) == {("p0", "q1")}


def test_exec_rejects_negative_time_and_unknown_action():
    net = two_resets()
    assert O.exec_global(net, [("a", F(-1))]) == set()
    assert O.exec_global(net, [("nope", F(1))]) == set()


def test_exec_local_still_checks_participant_order():
    net = missed_sync()
    # A2 cannot run b2 before b1's time on its own line.
    run = [("b1", F(2)), ("b2", F(1))]
    assert O.exec_local(net, run) == set()


def test_exec_handles_exact_rationals():
    net = guard_order()
    assert O.exec_global(net, [("a", F(1))]) == {("r1", "s0")}
    assert O.exec_global(net, [("a", F(2_000_001, 2_000_000))]) == set()


# --------------------------------------------------------------------------
# Run search


def test_find_runs_on_the_missed_synchronization():
    net = missed_sync()
    assert O.find_global_run(net, ["b1", "b2", "a1"]) is None
    got = O.find_local_run(net, ["b1", "b2", "a1"])
    assert got is not None
    times, state = got
    assert state == ("p1", "q2")
    assert times == [F(2), F(5), F(2)]
    assert O.find_local_run(net, ["b1", "b2", "a1", "c"]) is None
    assert O.find_global_run(net, ["b1", "b2", "a1", "c"]) is None


def test_found_runs_replay_through_exec():
    net = missed_sync()
    for word in all_words(net, 4):
        got = O.find_global_run(net, word)
        if got is None:
            continue
        times, state = got
        assert state in O.exec_global(net, list(zip(word, times)))
        got_l = O.find_local_run(net, word)
        assert got_l is not None  # global-feasible words are local-feasible
        times_l, state_l = got_l
        assert state_l in O.exec_local(net, list(zip(word, times_l)))


@pytest.mark.parametrize("make", [two_resets, missed_sync, guard_order])
def test_zone_emptiness_matches_solver_globally(make):
    net = make()
    nv = Z.NetVars(net)
    for word in all_words(net, 4):
        zone = global_zone_of(net, nv, word)
        run = O.find_global_run(net, word)
        assert (zone is not None) == (run is not None), word


@pytest.mark.parametrize("make", [two_resets, missed_sync, guard_order])
def test_zone_emptiness_matches_solver_locally(make):
    net = make()
    nv = Z.NetVars(net)
    for word in all_words(net, 4):
        zone = local_zone_of(net, nv, word)
        run = O.find_local_run(net, word)
        assert (zone is not None) == (run is not None), word


def test_sampled_zone_points_are_executable():
    # A sampled point of the global zone of a word gives concrete event
    # times through its reference value; replays must succeed.  (The zone
    # records reset offsets, so we sample from intermediate zones.)
    net = missed_sync()
    nv = Z.NetVars(net)
    for word in [("b1",), ("b1", "a1"), ("b1", "a1", "b2")]:
        run = O.find_global_run(net, word)
        assert run is not None
        times, state = run
        assert state in O.exec_global(net, list(zip(word, times)))


# --------------------------------------------------------------------------
# Trace classes


def test_trace_class_frozen():
    net = missed_sync()
    got = O.trace_class(net, ("b1", "b2", "a1", "c"))
    assert got == {
        ("a1", "b1", "b2", "c"),
        ("b1", "a1", "b2", "c"),
        ("b1", "b2", "a1", "c"),
    }


def test_trace_class_shared_action_blocks_swaps():
    net = missed_sync()
    # c involves both processes: nothing can move past it.
    assert O.trace_class(net, ("c", "b1")) == {("c", "b1")}


def test_trace_class_of_independent_word_is_all_interleavings():
    net = two_resets()
    got = O.trace_class(net, ("a", "b"))
    assert got == {("a", "b"), ("b", "a")}


def test_trace_class_limit():
    net = two_resets()
    with pytest.raises(RuntimeError):
        O.trace_class(net, ("a", "b") * 8, limit=10)


def test_interleaving_zones_of_independent_word():
    net = two_resets()
    zones = O.interleaving_zones(net, ("a", "b"))
    assert len(zones) == 2
    assert zones[0].dbm != zones[1].dbm  # one zone per reset order


def test_interleaving_zones_singleton_and_empty():
    net = missed_sync()
    assert len(O.interleaving_zones(net, ("b1",))) == 1
    assert O.interleaving_zones(net, ("b1", "b2", "a1", "c")) == []


# --------------------------------------------------------------------------
# Aggregation of trace classes


@pytest.mark.parametrize(
    "make,word",
    [
        (two_resets, ("a", "b")),
        (two_resets, ("a",)),
        (guard_order, ("b", "a")),
        (guard_order, ("a", "b")),
        (missed_sync, ("b1", "b2", "a1")),
        (missed_sync, ("a1", "b1", "b2")),
        (missed_sync, ("b1", "a1")),
    ],
)
def test_aggregation_on_reference_nets(make, word):
    assert O.check_aggregation(make(), word)


def test_aggregation_on_fuzzed_nets():
    for seed in range(25):
        rng = Random(seed)
        net = O.random_net(rng)
        word = O.random_feasible_word(net, rng)
        if word is not None:
            assert O.check_aggregation(net, word), (seed, word)


# --------------------------------------------------------------------------
# Local-to-global translation


def test_soon_translation_on_reference_nets():
    assert O.check_soon_translation(missed_sync(), ("b1", "b2", "a1"))
    assert O.check_soon_translation(guard_order(), ("b", "a"))
    assert O.check_soon_translation(two_resets(), ("b", "a"))


def test_soon_translation_vacuous_for_infeasible_words():
    assert O.check_soon_translation(missed_sync(), ("b1", "b2", "a1", "c"))


def test_soon_translation_on_fuzzed_nets():
    for seed in range(25):
        rng = Random(seed)
        net = O.random_net(rng)
        word = O.random_feasible_word(net, rng)
        if word is not None:
            assert O.check_soon_translation(net, word), (seed, word)


# --------------------------------------------------------------------------
# Regions and extrapolation


def test_clock_region_equiv_tables():
    b = MaxConstants({"x": 2, "y": 3})
    u = {"x": F(1, 2), "y": F(3, 2)}
    assert O.clock_region_equiv(u, {"x": F(1, 4), "y": F(5, 4)}, b)
    assert not O.clock_region_equiv(u, {"x": F(3, 4), "y": F(5, 4)}, b)  # order flips
    assert not O.clock_region_equiv(u, {"x": F(3, 2), "y": F(1, 2)}, b)  # floors move
    assert O.clock_region_equiv({"x": F(5)}, {"x": F(99)}, MaxConstants({"x": 2}))
    assert not O.clock_region_equiv({"x": F(1)}, {"x": F(1, 2)}, MaxConstants({"x": 2}))
    assert O.clock_region_equiv({"x": F(7)}, {"x": F(1)}, MaxConstants({"x": None}))


def test_clock_region_equiv_is_reflexive_and_symmetric():
    rng = Random(2)
    b = MaxConstants({"x": 2, "y": 1})
    vals = [
        {"x": F(rng.randint(0, 6), rng.choice([1, 2, 3])),
         "y": F(rng.randint(0, 6), rng.choice([1, 2, 3]))}
        for _ in range(40)
    ]
    for u in vals:
        assert O.clock_region_equiv(u, u, b)
        for v in vals:
            assert O.clock_region_equiv(u, v, b) == O.clock_region_equiv(v, u, b)


def test_clock_region_equivalent_points_satisfy_same_guards():
    rng = Random(4)
    b = MaxConstants({"x": 2, "y": 3})
    atoms = [("x", op, c) for op in ("<", "<=", "==", ">=", ">") for c in (0, 1, 2)]
    atoms += [("y", op, c) for op in ("<", "<=", ">", ">=") for c in (0, 2, 3)]
    for _ in range(120):
        u = {k: F(rng.randint(0, 8), rng.choice([1, 2, 4])) for k in ("x", "y")}
        v = {k: F(rng.randint(0, 8), rng.choice([1, 2, 4])) for k in ("x", "y")}
        if not O.clock_region_equiv(u, v, b):
            continue
        for clock, op, c in atoms:
            assert O._atom_holds(u[clock], op, c) == O._atom_holds(v[clock], op, c)


def test_extrapolation_respects_regions_on_reachable_zones():
    net = missed_sync()
    consts = max_constants(net)
    rng = Random(5)
    for node in explore_global(net).nodes:
        assert O.check_extrapolation_regions(node.proj, consts, rng, samples=12)


def test_extrapolation_respects_regions_on_fuzzed_zones():
    for seed in range(10):
        rng = Random(seed)
        net = O.random_net(rng)
        consts = max_constants(net)
        for node in explore_global(net).nodes[:6]:
            assert O.check_extrapolation_regions(node.proj, consts, rng, samples=6)


# --------------------------------------------------------------------------
# Difference-based regions over reference/offset valuations


def _refval(x, t1, y, t2):
    return {"x": F(x), "t1": F(t1), "y": F(y), "t2": F(t2)}


def test_region_equiv_ignores_large_reference_gaps():
    # Every pairwise difference is 0 or beyond the bound on both sides.
    assert O.region_equiv(_refval(0, 0, 0, 4), _refval(0, 0, 0, 5), 3)


def test_region_equiv_reflexive_and_rejects_layout_mismatch():
    v = _refval(F(1, 2), 2, 0, 3)
    assert O.region_equiv(v, v, 3)
    with pytest.raises(ValueError, match="layout"):
        O.region_equiv(v, {"x": F(0)}, 3)


def test_region_equiv_separates_floors_and_zero_fractions():
    base = _refval(0, 2, 0, 6)
    assert O.region_equiv(base, _refval(0, 2, 0, 7), 3)
    assert not O.region_equiv(base, _refval(0, 3, 0, 7), 3)  # floor of t1-x
    assert not O.region_equiv(base, _refval(0, F(5, 2), 0, 7), 3)  # frac of t1-x
    assert O.region_equiv(_refval(0, F(5, 2), 0, 6), _refval(0, F(9, 4), 0, 7), 3)


def test_region_equiv_is_an_equivalence_on_random_triples():
    rng = Random(11)
    vals = [
        {k: F(rng.randint(0, 8), rng.choice([1, 2, 4])) for k in ("x", "t1", "y", "t2")}
        for _ in range(24)
    ]
    for u in vals:
        assert O.region_equiv(u, u, 3)
    for u, v, w in itertools.product(vals, repeat=3):
        uv = O.region_equiv(u, v, 3)
        assert uv == O.region_equiv(v, u, 3)
        if uv and O.region_equiv(v, w, 3):
            assert O.region_equiv(u, w, 3)


def test_region_elapse_demo_finds_no_admissible_shift():
    report = O.region_elapse_demo()
    assert report["base_equiv"] is True
    assert report["admissible"] == []
    assert report["preserved"] is False
    assert "2" in report["grid"] and "9" in report["grid"]
    assert len(report["grid"]) == 18


def test_region_elapse_demo_shift_is_pinned_by_the_reference_offset_pair():
    # Restricted to (x, t1) alone the shift of exactly 2 would work; the
    # second reference rules it out.
    v1 = {"x": F(0), "t1": F(2)}
    v2 = {"x": F(0), "t1": F(2)}
    assert O.region_equiv(v1, v2, 3)
    full1 = _refval(0, 2, 0, 4)
    assert not O.region_equiv(full1, _refval(0, 2, 0, 5), 3)  # t1-t2: -2 vs -3


# --------------------------------------------------------------------------
# The older widening and the demo


def test_maximize_zone_grows_and_is_idempotent():
    from lzg.dbm import includes

    net = missed_sync()
    nv = Z.NetVars(net)
    consts = max_constants(net)
    zone = local_zone_of(net, nv, ("b1", "b2", "a1"))
    wide = O.maximize_zone(zone, consts)
    assert includes(wide.dbm, zone.dbm)
    assert O.maximize_zone(wide, consts) is wide


def test_maximize_zone_forgets_reset_order():
    # After b1 b2 the offset z~ is pinned at 5, beyond cmax 3: widening
    # drops the pin, which is exactly the unsound forgetting.
    net = missed_sync()
    nv = Z.NetVars(net)
    consts = max_constants(net)
    zone = local_zone_of(net, nv, ("b1", "b2"))
    zo = nv.loff["z"]
    assert zone.dbm[zo, 0] == 11  # z~ <= 5 encoded
    wide = O.maximize_zone(zone, consts)
    from lzg.dbm import INF

    assert wide.dbm[zo, 0] == INF


def test_demo_verdicts():
    out = O.overapproximation_demo()
    assert out["global_found"] is False
    assert out["local_found"] is False
    assert out["raw_found"] is True
    assert out["spurious"] is True
    assert out["raw_witness"] == ["b1", "b2", "a1", "c"]
    assert out["witness_class_size"] == 3
    assert out["witness_class_feasible"] == []


# --------------------------------------------------------------------------
# Random nets


def test_random_net_is_deterministic_per_seed():
    from lzg.model import render_network

    a = render_network(O.random_net(Random(42)))
    b = render_network(O.random_net(Random(42)))
    assert a == b


def test_random_net_shape():
    net = O.random_net(Random(3), n_procs=3, chain=2, n_shared=1)
    assert len(net.processes) == 3
    assert all(len(p.states) == 3 for p in net.processes)
    shared = [a for a, dom in net.dom.items() if len(dom) > 1]
    for a in shared:
        assert len(net.dom[a]) == 2


def test_random_feasible_word_is_locally_feasible():
    hits = 0
    for seed in range(15):
        rng = Random(seed)
        net = O.random_net(rng)
        word = O.random_feasible_word(net, rng)
        if word is not None:
            hits += 1
            assert O.find_local_run(net, word) is not None
    assert hits >= 10  # the generator should usually succeed


def test_engines_agree_with_solver_on_fuzzed_nets():
    for seed in range(15):
        rng = Random(seed)
        net = O.random_net(rng)
        g = explore_global(net)
        l = explore_local(net)
        reached_g = {n.state for n in g.nodes}
        reached_l = {n.state for n in l.nodes}
        assert reached_g == reached_l, seed
        # Every witness the engine produces must have a concrete timing.
        for node in g.nodes:
            run = O.find_global_run(net, node.word())
            assert run is not None and run[1] == node.state, (seed, node.word())
