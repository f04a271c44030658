import pytest
from hypothesis import given
from hypothesis import strategies as st

from hpcfabric.config import bundled, load_network
from hpcfabric.dwdm_plan import (
    Awg,
    BroadcastNetwork,
    CollisionError,
    ItuChannel,
    Node,
    PlanError,
    ReceiverSpec,
    StarCoupler,
    TransmitterSpec,
    active_channel_assignments,
    awg_channel_for_port,
    awg_route,
    channel_frequency_thz,
    channel_wavelength_nm,
    channels_in_band,
    coupler_output_channels,
    detect_collisions,
    free_channels,
    reachability,
)

C = 299_792_458.0
TESTBED = load_network(bundled("testbed_network.json"))[0].network

# frozen: c / (190 THz + n * 0.1 THz)
WAVELENGTHS = {
    30: 1553.329, 31: 1552.524, 32: 1551.721, 33: 1550.918,
    34: 1550.116, 35: 1549.315, 36: 1548.515, 37: 1547.715,
}


@pytest.mark.parametrize("ch, nm", sorted(WAVELENGTHS.items()))
def test_channel_wavelengths(ch, nm):
    assert channel_wavelength_nm(ch) == pytest.approx(nm, abs=5e-4)


def test_channel_frequency():
    assert channel_frequency_thz(30) == pytest.approx(193.0)
    assert ItuChannel(-5).frequency_thz == pytest.approx(189.5)
    with pytest.raises(ValueError):
        ItuChannel(-2000)


def test_band_queries():
    assert [c.index for c in channels_in_band(1547.0, 1554.0)] == list(range(30, 38))
    assert len(channels_in_band(1525.0, 1565.0)) == 50
    assert channels_in_band(1560.0, 1550.0) == []


@given(st.floats(1400.0, 1700.0), st.floats(0.5, 60.0))
def test_band_matches_direct_scan(lo, width):
    hi = lo + width
    expected = [n for n in range(-300, 400) if lo <= C / ((190.0 + 0.1 * n) * 1e12) * 1e9 <= hi]
    assert [c.index for c in channels_in_band(lo, hi)] == expected


def test_awg_routing_is_cyclic():
    awg = Awg(8, base_channel=30)
    assert [awg_route(ch, awg) for ch in range(30, 39)] == [0, 1, 2, 3, 4, 5, 6, 7, 0]
    assert awg_channel_for_port(3, awg) == 33
    with pytest.raises(IndexError):
        awg_channel_for_port(8, awg)


@given(st.integers(1, 64), st.integers(-50, 50), st.integers(-500, 500))
def test_awg_route_round_trip(ports, base, ch):
    awg = Awg(ports, base_channel=base)
    port = awg_route(ch, awg)
    assert 0 <= port < ports
    assert (awg_channel_for_port(port, awg) - ch) % ports == 0


def test_element_validation():
    with pytest.raises(PlanError):
        StarCoupler(0, 4)
    with pytest.raises(PlanError):
        Awg(4, excess_db=-1.0)
    with pytest.raises(PlanError):
        Awg(4, direction="sideways")
    with pytest.raises(PlanError):
        ReceiverSpec("PMT", -20.0)
    with pytest.raises(PlanError):
        TransmitterSpec(40, tuning=frozenset(range(30, 38)))


def _rx(*chs):
    return (ReceiverSpec("APD", -26.5, frozenset(chs)),)


def small_network(ch_b=31):
    return BroadcastNetwork(
        nodes=(
            Node("A", (TransmitterSpec(30),), _rx(31)),
            Node("B", (TransmitterSpec(ch_b, tuning=frozenset({30, 31, 32})),), _rx(30)),
        ),
        coupler=StarCoupler(2, 2),
    )


def test_two_node_reachability():
    net = small_network()
    assert reachability(net) == {"A": {"B"}, "B": {"A"}}
    assert coupler_output_channels(net) == [{30, 31}, {30, 31}]


def test_collision_detected_and_named():
    net = small_network(ch_b=30)
    assert detect_collisions(net) == [(30, ["A", "B"])]
    with pytest.raises(CollisionError, match="collision on channel 30 between A, B"):
        reachability(net)


def test_retune_returns_copy():
    net = small_network()
    moved = net.retune("B", 32)
    assert active_channel_assignments(moved) == {30: ["A"], 32: ["B"]}
    assert active_channel_assignments(net) == {30: ["A"], 31: ["B"]}


def test_network_checks_ports_and_names():
    nodes = tuple(Node(f"n{i}", (TransmitterSpec(30 + i),), _rx(30)) for i in range(3))
    with pytest.raises(PlanError):
        BroadcastNetwork(nodes=nodes, coupler=StarCoupler(2, 4))
    with pytest.raises(PlanError):
        BroadcastNetwork(nodes=(nodes[0], nodes[0]), coupler=StarCoupler(4, 4))


def test_testbed_plan(plan):
    net = plan.network
    assert detect_collisions(net) == []
    assert free_channels(net, range(30, 38), querying="N3") == {35, 36}
    assert reachability(net) == {
        "N1": {"N4"},
        "N2": {"N4"},
        "N3": {"N1", "N2", "N3", "N4"},
        "N4": {"N4", "N2", "N3"},
    }


@given(st.integers(30, 37))
def test_retuning_node3_collides_unless_free(ch):
    net = TESTBED.retune("N3", ch)
    assert (detect_collisions(net) == []) == (ch in {35, 36})
