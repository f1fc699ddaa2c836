"""Network model: channels, devices, routing, topology, mobility."""

import json

import networkx as nx
import numpy as np
import pytest

from qnetsim.des import SimEnv
from qnetsim.netmodel import (FIBER_LOSS_DB_PER_KM, ClassicalFiberChannel,
                              FreeSpaceChannel, Link, Mobility, Network, Node,
                              PhotonSource, PolarizationDetector,
                              QuantumFiberChannel, TopologyError,
                              classical_delay_ps, load_topology_from,
                              survival_probability, triangular_trajectory)


@pytest.fixture
def env():
    return SimEnv("net", seed=5)


# ---- channel physics ------------------------------------------------------

def test_propagation_delay_is_5us_per_km():
    assert classical_delay_ps(1.0) == 5_000_000
    assert classical_delay_ps(50.0) == 250_000_000


def test_survival_probability_oracle():
    # 50 km at 0.2 dB/km = 10 dB -> 10% survival
    assert survival_probability(50 * FIBER_LOSS_DB_PER_KM) == pytest.approx(0.1)
    assert survival_probability(0.0) == 1.0
    assert survival_probability(30.0) == pytest.approx(1e-3)


def test_quantum_channel_loss_statistics(env):
    a, b = Node("a", env), Node("b", env)
    ch = QuantumFiberChannel("q", a, b, 50.0, env=env)
    received = []
    b.receive_quantum_msg = lambda q, src: received.append(q)
    env.init()
    for i in range(20000):
        ch.transmit(i, src=a)
    env.run()
    assert abs(len(received) / 20000 - 0.1) < 0.01


def test_classical_channel_delivers_after_delay(env):
    a, b = Node("a", env), Node("b", env)
    ch = ClassicalFiberChannel("c", a, b, 2.0, env=env)
    arrivals = []
    b.receive_classical_msg = lambda msg, src: arrivals.append((env.now, msg, src))
    env.init()
    ch.transmit("hello", src=a)
    env.run()
    assert arrivals == [(10_000_000, "hello", a)]


def test_channel_rejects_wrong_sender(env):
    a, b, c = Node("a", env), Node("b", env), Node("c", env)
    ch = ClassicalFiberChannel("c", a, b, 1.0, env=env)
    env.init()
    with pytest.raises(ValueError):
        ch.transmit("x", src=c)


def test_free_space_loss_interpolation(env):
    a, b = Node("a", env), Node("b", env)
    ch = FreeSpaceChannel("f", a, b, loss_table=[(100, 10), (200, 30)], env=env)
    assert ch.loss_db(150) == pytest.approx(20.0)
    assert ch.survival_probability(100) == pytest.approx(0.1)


# ---- devices --------------------------------------------------------------

def test_photon_source_poisson_statistics(env):
    src = PhotonSource("s", mean_photon_num=0.5, env=env)
    counts = src.photon_counts(200_000, np.random.default_rng(1))
    assert abs(counts.mean() - 0.5) < 0.01
    assert abs(counts.var() - 0.5) < 0.02  # Poisson: variance == mean


def test_photon_source_exact_number(env):
    src = PhotonSource("s", exact_photon_number=1, env=env)
    assert (src.photon_counts(100, np.random.default_rng(0)) == 1).all()


def test_photon_source_pulse_interval(env):
    assert PhotonSource("s", frequency=1e6, env=env).pulse_interval_ps == 1_000_000


def test_detector_efficiency_and_dark_counts(env):
    det = PolarizationDetector("d", efficiency=0.5, dark_count_rate=1000.0, env=env)
    rng = np.random.default_rng(2)
    # single photons at 50% efficiency, negligible darks in a 1us window
    clicks = det.detect(np.ones(100_000, dtype=np.int64), 1e-6, rng)
    expected = 0.5 + 0.5 * det.dark_click_probability(1e-6)
    assert abs(clicks.mean() - expected) < 0.01
    # no photons: only dark counts
    darks = det.detect(np.zeros(100_000, dtype=np.int64), 1e-3, rng)
    assert abs(darks.mean() - det.dark_click_probability(1e-3)) < 0.01


def test_detector_validates_efficiency(env):
    with pytest.raises(ValueError):
        PolarizationDetector("d", efficiency=1.5, env=env)


# ---- routing --------------------------------------------------------------

def _mesh(env, edges, names):
    net = Network("n", env=env)
    nodes = {n: Node(n, env=env) for n in names}
    for node in nodes.values():
        net.install_node(node)
    for i, (a, b) in enumerate(edges):
        link = Link(f"l{i}", ends=(nodes[a], nodes[b]), env=env)
        net.install_link(link)
        for s, r in ((a, b), (b, a)):
            link.install_channel(ClassicalFiberChannel(
                f"c{i}:{s}->{r}", nodes[s], nodes[r], 1.0, env=env))
    return net


def test_routing_matches_networkx_hop_counts(env):
    names = list("ABCDEFG")
    rng = np.random.default_rng(9)
    edges = [(names[i], names[j]) for i in range(7) for j in range(i + 1, 7)
             if rng.random() < 0.4]
    edges += [("A", "B"), ("B", "C")]  # keep it mostly connected
    net = _mesh(env, edges, names)
    env.init()
    g = nx.Graph(edges)
    for src in names:
        for dst in names:
            if src == dst or src not in g or dst not in g:
                continue
            path = net.route(src, dst)
            if not nx.has_path(g, src, dst):
                assert path is None
            else:
                assert path is not None
                assert len(path) - 1 == nx.shortest_path_length(g, src, dst)


def test_routing_tie_breaks_lexicographically(env):
    # A-B-D and A-C-D both have two hops; next hop from A must be B
    net = _mesh(env, [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")], "ABCD")
    env.init()
    assert net.route("A", "D") == ["A", "B", "D"]


def test_unreachable_returns_none(env):
    net = _mesh(env, [("A", "B")], "ABC")
    env.init()
    assert net.route("A", "C") is None


def test_route_to_self(env):
    net = _mesh(env, [("A", "B")], "AB")
    env.init()
    assert net.route("A", "A") == ["A"]


def test_duplicate_node_name_rejected(env):
    net = Network("n", env=env)
    net.install_node(Node("A", env=env))
    with pytest.raises(ValueError):
        net.install_node(Node("A", env=env))


# ---- topology documents ---------------------------------------------------

TOPOLOGY = {
    "nodes": [
        {"name": "alice", "devices": [{"kind": "photon_source",
                                       "frequency": 1e6,
                                       "mean_photon_num": 0.2}]},
        {"name": "bob", "devices": [{"kind": "polarization_detector",
                                     "efficiency": 0.9}]},
    ],
    "links": [
        {"ends": ["alice", "bob"],
         "channels": [
             {"kind": "classical-fiber", "sender": "alice", "receiver": "bob",
              "distance_km": 10.0},
             {"kind": "quantum-fiber", "sender": "alice", "receiver": "bob",
              "distance_km": 10.0, "loss_db_per_km": 0.3},
         ]},
    ],
}


def test_topology_from_dict(env):
    net = load_topology_from(TOPOLOGY, env=env)
    alice = net.node("alice")
    assert alice.device_of_kind(PhotonSource).mean_photon_num == 0.2
    q = net.channel_between(alice, net.node("bob"), QuantumFiberChannel)
    assert q.loss_db == pytest.approx(3.0)


def test_topology_from_json_text(env):
    net = load_topology_from(json.dumps(TOPOLOGY), env=env)
    assert {n.name for n in net.nodes} == {"alice", "bob"}


def test_topology_from_file(tmp_path, env):
    p = tmp_path / "topo.json"
    p.write_text(json.dumps(TOPOLOGY))
    net = load_topology_from(p, env=env)
    assert len(net.links) == 1


def test_topology_unknown_device_kind(env):
    doc = {"nodes": [{"name": "a", "devices": [{"kind": "flux_capacitor"}]}]}
    with pytest.raises(TopologyError):
        load_topology_from(doc, env=env)


def test_topology_unknown_channel_node(env):
    doc = {"nodes": [{"name": "a"}, {"name": "b"}],
           "links": [{"ends": ["a", "b"],
                      "channels": [{"kind": "classical-fiber", "sender": "a",
                                    "receiver": "zz", "distance_km": 1}]}]}
    with pytest.raises(TopologyError):
        load_topology_from(doc, env=env)


def test_topology_negative_distance(env):
    doc = {"nodes": [{"name": "a"}, {"name": "b"}],
           "links": [{"ends": ["a", "b"],
                      "channels": [{"kind": "classical-fiber", "sender": "a",
                                    "receiver": "b", "distance_km": -1}]}]}
    with pytest.raises(TopologyError):
        load_topology_from(doc, env=env)


# ---- mobility -------------------------------------------------------------

def test_triangular_trajectory_shape():
    traj = triangular_trajectory(0, 100, 500, 1400)
    assert traj(0) == pytest.approx(1400)
    assert traj(50) == pytest.approx(500)
    assert traj(100) == pytest.approx(1400)
    assert traj(25) == pytest.approx(950)


def test_mobility_window_and_loss():
    mob = Mobility(triangular_trajectory(0, 100, 500, 1400), (0, 100),
                   [(500, 13), (1400, 30)])
    assert mob.satellite_pass(-1) is None
    assert mob.satellite_pass(101) is None
    d, loss = mob.satellite_pass(50)
    assert d == pytest.approx(500)
    assert loss == pytest.approx(13)
    # symmetric about the midpoint
    d1, _ = mob.satellite_pass(30)
    d2, _ = mob.satellite_pass(70)
    assert d1 == pytest.approx(d2)
