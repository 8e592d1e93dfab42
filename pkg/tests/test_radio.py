import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from manet_dpraodv.mobility import Position, WaypointState
from manet_dpraodv.packets import Data, Rreq
from manet_dpraodv.radio import ChannelModel, SendResult

from conftest import queued_packets, static_net


@pytest.mark.parametrize("gap,linked", [(100.0, True), (250.0, True), (250.1, False)])
def test_neighbors_closed_disk(gap, linked):
    net = static_net([(100, 400), (100 + gap, 400)])
    assert (1 in net.radio.neighbors(0)) is linked
    assert (0 in net.radio.neighbors(1)) is linked


@settings(max_examples=30, deadline=None)
@given(pts=st.lists(st.tuples(st.floats(0, 800), st.floats(0, 800)), min_size=2, max_size=10))
def test_neighbor_symmetry(pts):
    net = static_net(pts)
    for v in range(len(pts)):
        for u in net.radio.neighbors(v):
            assert v in net.radio.neighbors(u)
            assert u != v


def test_broadcast_reaches_every_neighbor():
    net = static_net([(400, 400), (500, 400), (300, 400), (400, 500), (50, 50)])
    rreq = Rreq(0, 1, 1, 9, 0)
    assert sorted(net.radio.broadcast(0, rreq)) == [1, 2, 3]
    evs = net.sim.queued()
    assert [ev.time for ev in evs] == [0.002] * 3
    assert net.metrics.control_tx == 1


def test_isolated_broadcast_still_counts():
    net = static_net([(0, 0), (700, 700)])
    assert net.radio.broadcast(0, Rreq(0, 1, 1, 1, 0)) == []
    assert net.metrics.control_tx == 1
    assert queued_packets(net) == []


def test_connectivity_is_a_send_time_snapshot():
    net = static_net([(100, 400), (300, 400)])
    # node 1 leaves at 1000 m/s right as the packet goes out
    net.mobility.script(1, [WaypointState(Position(300, 400), Position(800, 400), 1000.0, 0.0, 0.0)])
    net.radio.broadcast(0, Rreq(0, 1, 1, 7, 0))
    assert [(t, type(p)) for t, p, _ in queued_packets(net)] == [(1, Rreq)]
    net.sim.run_until(0.01)
    assert net.mobility.position_at(1, 0.002).x == pytest.approx(302.0)


@pytest.mark.parametrize("gap,result", [(200.0, SendResult.DELIVERED), (300.0, SendResult.OUT_OF_RANGE)])
def test_unicast(gap, result):
    net = static_net([(100, 400), (100 + gap, 400)])
    pkt = Data(0, 0, 1, 512, 0.0)
    assert net.radio.unicast(0, 1, pkt) is result
    assert net.metrics.data_tx == (1 if result is SendResult.DELIVERED else 0)


def test_channel_model_validation():
    with pytest.raises(ValueError):
        ChannelModel(tx_range=0)
    with pytest.raises(ValueError):
        ChannelModel(per_hop_latency=-1)
