import logging

import pytest

from manet_dpraodv.config import FlowSpec, ScenarioConfig
from manet_dpraodv.engine import RandomStream
from manet_dpraodv.experiment import pair_scenario
from manet_dpraodv.network import Network, assign_flows
from manet_dpraodv.packets import Alarm, Data, Rreq
from manet_dpraodv.traffic import (
    CbrFlow,
    MetricsAccumulator,
    MetricsReport,
    compute_avg_delay,
    compute_nro,
    compute_pdr,
)

from conftest import static_net


@pytest.mark.parametrize("start,stop,interval,count", [
    (10.0, 11.0, 0.25, 4),
    (1.0, 11.0, 0.25, 40),
    (0.0, 1.0, 0.1, 10),
    (5.0, 5.0, 0.25, 0),
    (5.0, 4.0, 0.25, 0),
    (0.0, 1.01, 0.25, 5),
])
def test_cbr_packet_count(start, stop, interval, count):
    f = CbrFlow(0, 0, 1, start, stop, interval)
    assert f.packet_count() == count
    assert all(f.tick_time(k) < stop for k in range(count))


def test_cbr_ticks_do_not_drift():
    f = CbrFlow(0, 0, 1, 0.0, 1000.0, 0.1)
    assert f.packet_count() == 10_000
    assert f.tick_time(9999) == pytest.approx(999.9, abs=1e-9)


def test_generated_packets_match_schedule():
    net = static_net([(0, 0), (100, 0)], flows=[FlowSpec(0, 1, 10.0, 11.0, 0.25)], sim_time_s=12.0)
    net.run()
    assert net.metrics.sent == 4
    assert len(net.metrics.deliveries) == 4


def acc_with(sent, delays, control=0, alarms=0):
    acc = MetricsAccumulator()
    for k in range(sent):
        acc.record_sent(Data(0, 0, 1, 512, 0.0, 0, k))
    for d in delays:
        acc.record_delivery(Data(0, 0, 1, 512, 0.0, 1), d)
    for _ in range(control - alarms):
        acc.record_tx(Rreq(0, 1, 1, 1, 0))
    for _ in range(alarms):
        acc.record_tx(Alarm(3, 0, 1))
    return acc


def test_pdr():
    assert compute_pdr(acc_with(100, [0.01] * 95)) == 0.95


def test_pdr_no_traffic_warns(caplog):
    with caplog.at_level(logging.WARNING):
        assert compute_pdr(acc_with(0, [])) == 0.0
    assert "no data" in caplog.text
    assert MetricsReport.from_accumulator(acc_with(0, [])).warnings == ("no data sent",)


def test_avg_delay():
    assert compute_avg_delay(acc_with(3, [0.01, 0.02, 0.03])) == pytest.approx(0.02, abs=1e-15)
    assert compute_avg_delay(acc_with(3, [])) is None


def test_nro():
    acc = acc_with(10, [0.01] * 10, control=25, alarms=5)
    assert compute_nro(acc) == 2.5
    assert compute_nro(acc, include_alarms=False) == 2.0
    assert acc.alarm_tx == 5 and acc.control_tx == 25
    assert compute_nro(acc_with(10, [], control=5)) is None


def test_report_alarm_accounting():
    rep = MetricsReport.from_accumulator(acc_with(10, [0.01] * 10, control=25, alarms=5))
    assert rep.nro == 2.5 and rep.nro_without_alarms == 2.0
    assert rep.nro >= rep.nro_without_alarms


def test_pair_oracle_metrics():
    rep = Network(pair_scenario()).run()
    assert (rep.sent, rep.delivered) == (10, 10)
    # one RREQ and one RREP over ten deliveries
    assert rep.nro == pytest.approx(0.2)
    # first packet waits for one discovery round trip
    assert rep.avg_delay == pytest.approx((3 * 0.002 + 9 * 0.002) / 10, abs=1e-12)


def test_per_flow_aggregation():
    flows = [FlowSpec(0, 1, 1.0, 2.0, 0.25), FlowSpec(1, 2, 1.0, 3.0, 0.5), FlowSpec(0, 3, 1.0, 2.0, 0.5)]
    net = static_net([(0, 0), (100, 0), (200, 0), (790, 790)], flows=flows, sim_time_s=10.0)
    rep = net.run()
    assert {k: v.sent for k, v in rep.per_flow.items()} == {0: 4, 1: 4, 2: 2}
    assert rep.per_flow[2].delivered == 0
    assert rep.sent == 10 and rep.delivered == 8
    assert rep.pdr == 0.8


def test_random_flows_avoid_malicious_nodes():
    cfg = ScenarioConfig(node_count=30, sim_time_s=300.0, malicious_nodes=(0, 5))
    flows = assign_flows(cfg, RandomStream(1, "traffic"))
    assert len(flows) == 5
    assert (flows[0].src, flows[0].dst) == (2, 7)
    for f in flows:
        assert f.src != f.dst
        assert {f.src, f.dst}.isdisjoint({0, 5})
        assert 0.0 <= f.start <= 10.0 and f.stop == 300.0


def test_flow_defaults_from_config():
    cfg = ScenarioConfig(node_count=3, sim_time_s=50.0, flows=(FlowSpec(1, 2),), cbr_interval_s=0.5)
    (f,) = assign_flows(cfg, RandomStream(1, "traffic"))
    assert (f.start, f.stop, f.interval, f.packet_bytes) == (1.0, 50.0, 0.5, 512)
