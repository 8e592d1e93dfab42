import pytest

from manet_dpraodv.config import ScenarioConfig
from manet_dpraodv.engine import PACKET_DELIVERY
from manet_dpraodv.network import Network


def static_net(positions, mode="aodv", malicious=(), flows=(), record_history=True, **kw):
    """Network over fixed positions; no traffic unless ``flows`` is given."""
    cfg = ScenarioConfig(
        node_count=len(positions),
        sim_time_s=kw.pop("sim_time_s", 60.0),
        protocol_mode=mode,
        positions=tuple(positions),
        malicious_nodes=tuple(malicious),
        flows=tuple(flows),
        **kw,
    )
    return Network(cfg, record_history=record_history)


def queued_packets(net, kind=None):
    """(receiver, packet, sender) for every pending delivery."""
    out = []
    for ev in net.sim.queued():
        if ev.kind != PACKET_DELIVERY:
            continue
        packet, frm = ev.payload
        if kind is None or isinstance(packet, kind):
            out.append((ev.target, packet, frm))
    return out


@pytest.fixture
def line3():
    # 0 -- 1 -- 2, 200 m spacing
    return static_net([(0, 400), (200, 400), (400, 400)])


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
