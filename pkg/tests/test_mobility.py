import statistics

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from manet_dpraodv.engine import RandomStream
from manet_dpraodv.mobility import (
    MobilityModel,
    Position,
    WaypointState,
    advance_waypoint,
    draw_speed,
    init_positions,
)


def test_init_positions_inside_terrain():
    (p,) = init_positions(1, (800.0, 800.0), RandomStream(1, "mobility"))
    assert 0 <= p.x <= 800 and 0 <= p.y <= 800


def test_init_positions_empty():
    assert init_positions(0, (800.0, 800.0), RandomStream(1, "mobility")) == []


def test_init_positions_uniform_mean():
    ps = init_positions(10_000, (800.0, 800.0), RandomStream(7, "mobility"))
    assert abs(statistics.fmean(p.x for p in ps) - 400) <= 10
    assert abs(statistics.fmean(p.y for p in ps) - 400) <= 10


def test_linear_motion():
    leg = WaypointState(Position(0, 0), Position(100, 0), 10.0, 0.0, 0.0)
    assert leg.position_at(5) == Position(50, 0)


def test_pause_holds_position():
    leg = WaypointState(Position(30, 40), Position(100, 0), 10.0, 12.0, 12.0)
    for t in (10.0, 11.0, 12.0):
        assert leg.position_at(t) == Position(30, 40)


def test_arrival_is_exact():
    leg = WaypointState(Position(0, 0), Position(100, 0), 10.0, 0.0, 0.0)
    assert leg.arrival == 10.0
    assert leg.position_at(10.0) == Position(100, 0)
    assert leg.position_at(10.5) == Position(100, 0)


def test_advance_waypoint_pause():
    s = RandomStream(1, "mobility")
    nxt = advance_waypoint(Position(5, 5), 10.0, s, (800, 800), 2.0, 1.0, 60.0)
    assert nxt.pause_until == 12.0
    assert nxt.current == Position(5, 5)
    assert 0 <= nxt.target.x <= 800 and 0 <= nxt.target.y <= 800


def test_speed_range():
    s = RandomStream(3, "mobility")
    speeds = [draw_speed(s, 1.0, 60.0) for _ in range(5000)]
    assert all(1.0 < v <= 60.0 for v in speeds)


def test_static_scenario_never_moves():
    m = MobilityModel(5, RandomStream(1, "mobility"), max_speed=0.0, horizon=100)
    for n in range(5):
        assert {m.position_at(n, t) for t in (0, 10, 50, 99.9)} == {m.initial[n]}


def test_nodes_start_paused():
    m = MobilityModel(3, RandomStream(1, "mobility"), pause_time=2.0, horizon=50)
    for n in range(3):
        assert m.position_at(n, 1.9) == m.initial[n]


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), ts=st.lists(st.floats(0, 300), min_size=1, max_size=30))
def test_positions_stay_in_terrain(seed, ts):
    m = MobilityModel(4, RandomStream(seed, "mobility"), terrain=(600.0, 400.0), horizon=300)
    for n in range(4):
        for t in ts:
            p = m.position_at(n, t)
            assert 0 <= p.x <= 600 and 0 <= p.y <= 400


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_distance_to_target_strictly_decreases_while_moving(seed):
    m = MobilityModel(2, RandomStream(seed, "mobility"), horizon=200)
    for leg in m.legs(0)[:5]:
        if leg.length == 0:
            continue
        ts = [leg.leg_start + f * (leg.arrival - leg.leg_start) for f in (0.05, 0.3, 0.6, 0.95)]
        ds = [leg.position_at(t).distance(leg.target) for t in ts]
        assert all(a > b for a, b in zip(ds, ds[1:]))


def test_trajectories_reproducible():
    a = MobilityModel(10, RandomStream(42, "mobility"), horizon=500)
    b = MobilityModel(10, RandomStream(42, "mobility"), horizon=500)
    assert a.trajectory_digest() == b.trajectory_digest()
    # query order must not matter
    for t in (400.0, 3.0, 250.0):
        assert [a.position_at(n, t) for n in range(10)] == [b.position_at(n, t) for n in reversed(range(10))][::-1]
    c = MobilityModel(10, RandomStream(43, "mobility"), horizon=500)
    assert c.trajectory_digest() != a.trajectory_digest()


def test_script_overrides_trajectory():
    m = MobilityModel(2, RandomStream(0, "mobility"), static_positions=[(0, 0), (100, 0)], horizon=50)
    m.script(1, [WaypointState(Position(100, 0), Position(400, 0), 10.0, 5.0, 5.0)])
    assert m.position_at(1, 4.0) == Position(100, 0)
    assert m.position_at(1, 15.0) == Position(200, 0)
    assert m.position_at(1, 1000.0) == Position(400, 0)
    with pytest.raises(ValueError):
        MobilityModel(2, RandomStream(0, "mobility"), static_positions=[(0, 0)])
