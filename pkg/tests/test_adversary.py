import pytest

from manet_dpraodv.adversary import BlackholeAgent, BlackholeConfig
from manet_dpraodv.engine import RandomStream
from manet_dpraodv.experiment import blackhole_scenario
from manet_dpraodv.network import Network
from manet_dpraodv.packets import Alarm, Data, Rerr, Rrep, Rreq

from conftest import queued_packets, static_net


def bh_line(**kw):
    # 0 (honest) -- 1 (blackhole)
    return static_net([(100, 400), (300, 400)], mode="aodv_attacked", malicious=(1,), **kw)


def test_forged_reply_in_offset_range():
    net = bh_line()
    bh = net.agents[1]
    assert isinstance(bh, BlackholeAgent)
    seqs = []
    for bid in range(1, 201):
        rrep = bh.handle_rreq(Rreq(0, 1, bid, 5, 10, 0), frm=0)
        seqs.append(rrep.dest_seq)
        assert rrep.hop_count == 1 and rrep.replier == 1 and rrep.destination == 5
    assert min(seqs) >= 25 and max(seqs) <= 210


def test_deterministic_offset():
    net = bh_line(seq_offset_lo=50, seq_offset_hi=50)
    rrep = net.agents[1].handle_rreq(Rreq(0, 1, 1, 5, 7, 0), frm=0)
    assert rrep.dest_seq == 57
    (to, pkt, frm), = queued_packets(net)
    assert (to, frm) == (0, 1) and pkt == rrep


def test_duplicate_rreq_answered_once():
    net = bh_line()
    bh = net.agents[1]
    assert bh.handle_rreq(Rreq(0, 1, 1, 5, 0, 0), frm=0) is not None
    assert bh.handle_rreq(Rreq(0, 1, 1, 5, 0, 0), frm=0) is None
    assert len(bh.forged) == 1


def test_data_swallowed():
    net = bh_line()
    net.agents[1].receive(Data(0, 0, 5, 512, 0.0), frm=0)
    assert net.agents[1].swallowed == 1
    assert net.metrics.drops["blackhole"] == 1
    assert queued_packets(net) == []


@pytest.mark.parametrize("pkt", [
    Rrep(5, 3, 0, 1, 10.0, 5),
    Rerr(((5, 2),)),
    Alarm(4, 0, 1),
])
def test_other_control_ignored(pkt):
    net = bh_line()
    net.agents[1].receive(pkt, frm=0)
    assert queued_packets(net) == []
    assert net.metrics.control_tx == 0


def test_config_validation():
    with pytest.raises(ValueError):
        BlackholeConfig(seq_offset_lo=20, seq_offset_hi=10)


def test_blackhole_draws_from_attacker_stream():
    net = bh_line()
    first = net.agents[1].handle_rreq(Rreq(0, 1, 1, 5, 0, 0), frm=0).dest_seq
    expected = RandomStream(net.cfg.master_seed, "attacker").uniform_int(15, 200)
    assert first == expected


def test_forged_reply_wins_the_race():
    net = Network(blackhole_scenario(seq_offset_lo=50, seq_offset_hi=50), record_history=True)
    report = net.run()
    bh = net.agents[0]
    src = net.agents[2]
    assert report.pdr <= 0.1
    assert bh.swallowed > 0
    first = bh.forged[0]
    # first RREQ asks for dest seq 0
    assert first.dest_seq == 50
    installs = [row for row in src.table.history if row[1] == 7 and row[5] != "invalidate"]
    assert installs[0][4] == 0  # next hop is the blackhole
