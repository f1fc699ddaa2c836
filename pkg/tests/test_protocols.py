"""Protocols: key pools, BB84, CHSH, teleportation, key distribution."""

import numpy as np
import pytest

from qnetsim.des import SimEnv
from qnetsim.netmodel import (ClassicalFiberChannel, Link, Network, Node,
                              PhotonSource, PolarizationDetector,
                              QuantumFiberChannel)
from qnetsim.protocols import (CLASSICAL_OPTIMAL_WIN_RATE,
                               QUANTUM_OPTIMAL_WIN_RATE, KeyPool, KeyRequest,
                               KeyDistributionNetwork, Protocol, ProtocolStack,
                               QubitManager, bb84_generate, bell_pair,
                               build_chain_network, chsh_play,
                               chsh_quantum_probs, chsh_referee,
                               decoy_bb84_generate, entanglement_swap,
                               teleport)
from qnetsim.protocols.chsh import classical_win_rate_exhaustive
from qnetsim.protocols.qkd_network import xor_keys
from qnetsim.protocols.teleport import bell_measure


# ---- protocol stack -------------------------------------------------------

def test_stack_builds_layering():
    a, b, c = Protocol("app"), Protocol("mid"), Protocol("low")
    stack = ProtocolStack("s")
    stack.build([(a, b), (b, c)])
    assert b in a.lower
    assert a in b.upper
    assert c in b.lower
    assert stack.protocols == [a, b, c]


def test_stack_messages_traverse_layers():
    log = []

    class Down(Protocol):
        def handle_upper(self, upper, msg, **kwargs):
            log.append(("down", msg))

    class Up(Protocol):
        def handle_lower(self, lower, msg, **kwargs):
            log.append(("up", msg))

    top, bottom = Up("top"), Down("bottom")
    stack = ProtocolStack("s")
    stack.build([(top, bottom)])
    top.send_lower("ping")
    bottom.send_upper("pong")
    assert log == [("down", "ping"), ("up", "pong")]


# ---- key pool -------------------------------------------------------------

def test_pool_default_thresholds():
    pool = KeyPool(40)
    assert pool.v_interrupt == 10
    assert pool.v_recover == 40


def test_pool_threshold_validation():
    with pytest.raises(ValueError):
        KeyPool(10, v_interrupt=8, v_recover=5)
    with pytest.raises(ValueError):
        KeyPool(0)


def test_pool_interrupt_and_recover_cycle():
    pool = KeyPool(20, v_interrupt=5, v_recover=20).fill()
    assert pool.status == "serving"
    assert pool.deliver(16) is not None  # 4 left < 5
    assert pool.status == "replenishing"
    assert pool.deliver(1) is None  # backpressure while replenishing
    for _ in range(15):
        pool.add_key()
    assert pool.status == "replenishing"  # 19 < V_r
    pool.add_key()
    assert pool.status == "serving"


def test_pool_rejects_oversized_request():
    pool = KeyPool(10).fill()
    with pytest.raises(ValueError):
        pool.deliver(11)


def test_pool_add_beyond_capacity_refused():
    pool = KeyPool(3).fill()
    assert pool.add_key() is False
    assert pool.v_current == 3


def test_pool_take_for_serves_both_segment_ends_identically():
    pool = KeyPool(20).fill()
    first = pool.take_for("req1", 5)
    second = pool.take_for("req1", 5)
    assert first == second  # the peer reads the same reserved keys
    third = pool.take_for("req1", 5)
    assert third is not None and third != first  # reservation was cleared


def test_pool_keys_have_requested_length():
    pool = KeyPool(5, key_length=16).fill()
    assert all(len(k) == 16 and set(k) <= {"0", "1"} for k in pool.keys)


# ---- XOR relay ------------------------------------------------------------

def test_xor_keys_identity():
    rng = np.random.default_rng(0)
    a = "".join(map(str, rng.integers(0, 2, 64)))
    b = "".join(map(str, rng.integers(0, 2, 64)))
    assert xor_keys(xor_keys(a, b), b) == a
    assert xor_keys(a, a) == "0" * 64


def test_trusted_repeater_unwind():
    """dst recovers the src segment key from the ciphertext chain."""
    rng = np.random.default_rng(1)
    keys = ["".join(map(str, rng.integers(0, 2, 32))) for _ in range(3)]
    ciphertexts = [xor_keys(keys[i], keys[i + 1]) for i in range(2)]
    recovered = keys[-1]
    for c in reversed(ciphertexts):
        recovered = xor_keys(recovered, c)
    assert recovered == keys[0]


# ---- BB84 -----------------------------------------------------------------

def _qkd_pair(env, distance_km, source_kw, det_kw):
    net = Network("n", env=env)
    alice, bob = Node("alice", env=env), Node("bob", env=env)
    alice.install_device(PhotonSource("alice.src", env=env, **source_kw))
    bob.install_device(PolarizationDetector("bob.det", env=env, **det_kw))
    net.install_node(alice)
    net.install_node(bob)
    link = Link("l", ends=(alice, bob), env=env)
    net.install_link(link)
    link.install_channel(QuantumFiberChannel("q", alice, bob, distance_km, env=env))
    return alice, bob


def test_bb84_detection_rate_matches_loss():
    env = SimEnv("b", seed=3)
    alice, bob = _qkd_pair(env, 50.0, {"exact_photon_number": 1},
                           {"efficiency": 1.0})
    env.init()
    result = bb84_generate(alice, bob, 100_000, rng=env.rng_for("bb84"))
    assert abs(result.detection_rate - 0.1) < 0.005
    # sifting keeps about half of the detections
    assert abs(result.sifted_length / result.detections - 0.5) < 0.05
    assert result.qber == 0.0


def test_bb84_sifted_keys_agree_when_noiseless():
    env = SimEnv("b", seed=4)
    alice, bob = _qkd_pair(env, 10.0, {"exact_photon_number": 1},
                           {"efficiency": 1.0})
    env.init()
    result = bb84_generate(alice, bob, 20_000, rng=env.rng_for("bb84"))
    assert np.array_equal(result.sifted_alice, result.sifted_bob)


def test_bb84_dark_counts_cause_errors():
    env = SimEnv("b", seed=5)
    alice, bob = _qkd_pair(env, 100.0, {"exact_photon_number": 1,
                                        "frequency": 1e6},
                           {"efficiency": 0.5, "dark_count_rate": 20_000.0})
    env.init()
    result = bb84_generate(alice, bob, 100_000, rng=env.rng_for("bb84"))
    assert result.qber > 0.0


def test_bb84_rejects_nonpositive_pulses():
    env = SimEnv("b", seed=0)
    alice, bob = _qkd_pair(env, 1.0, {}, {})
    env.init()
    with pytest.raises(ValueError):
        bb84_generate(alice, bob, 0)


def test_decoy_bb84_gains_increase_with_intensity():
    env = SimEnv("d", seed=6)
    alice, bob = _qkd_pair(env, 25.0, {"mean_photon_num": 0.5},
                           {"efficiency": 0.8})
    env.init()
    result = decoy_bb84_generate(
        alice, bob, 200_000,
        intensities={"signal": 0.5, "decoy": 0.1, "vacuum": 0.0},
        probabilities={"signal": 0.7, "decoy": 0.2, "vacuum": 0.1},
        rng=env.rng_for("decoy"))
    gains = {k: v["gain"] for k, v in result.per_intensity.items()}
    assert gains["signal"] > gains["decoy"] > gains["vacuum"]
    assert result.per_intensity["vacuum"]["detections"] == 0  # no darks here


def test_decoy_probabilities_must_normalize():
    env = SimEnv("d", seed=0)
    alice, bob = _qkd_pair(env, 1.0, {}, {})
    env.init()
    with pytest.raises(ValueError):
        decoy_bb84_generate(alice, bob, 10, {"s": 0.5}, {"s": 0.7})


# ---- CHSH -----------------------------------------------------------------

def test_referee_rule():
    assert chsh_referee(0, 0, 0, 0)
    assert chsh_referee(1, 1, 0, 1)
    assert not chsh_referee(1, 1, 0, 0)


def test_classical_exhaustive_is_exactly_three_quarters():
    assert classical_win_rate_exhaustive() == 0.75
    assert CLASSICAL_OPTIMAL_WIN_RATE == 0.75


def test_quantum_probs_win_mass_is_cos2_pi8():
    for x in (0, 1):
        for y in (0, 1):
            dist = chsh_quantum_probs(x, y)
            win = sum(p for (a, b), p in dist.items() if chsh_referee(x, y, a, b))
            assert win == pytest.approx(QUANTUM_OPTIMAL_WIN_RATE, abs=1e-12)


def test_quantum_play_beats_classical_bound():
    result = chsh_play("quantum-optimal", 40_000,
                       rng=np.random.default_rng(8))
    assert abs(result.win_rate - QUANTUM_OPTIMAL_WIN_RATE) < 0.01
    assert result.win_rate > 0.8


def test_unknown_strategy_rejected():
    with pytest.raises(ValueError):
        chsh_play("psychic", 10, rng=np.random.default_rng(0))


# ---- teleportation and swapping ------------------------------------------

def test_bell_measure_on_phi_plus_gives_00():
    m = QubitManager(rng=np.random.default_rng(0))
    a, b = bell_pair(m)
    z, x = bell_measure(m, a, b)
    assert (z, x) == (0, 0)


@pytest.mark.parametrize("seed", range(4))
def test_entanglement_swap_produces_phi_plus(seed):
    m = QubitManager(rng=np.random.default_rng(seed))
    left = bell_pair(m)
    right = bell_pair(m)
    ol, outer_right, _herald = entanglement_swap(m, left, right)
    state = m.qubit_state([ol, outer_right])
    phi_plus = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert abs(np.vdot(phi_plus, state.amps)) ** 2 == pytest.approx(1.0)


def _teleport_net(env, lossy=False):
    net = Network("n", env=env)
    nodes = {n: Node(n, env=env) for n in ("charlie", "alice", "bob")}
    for node in nodes.values():
        net.install_node(node)
    loss = 300.0 if lossy else 0.0
    for i, (a, b) in enumerate((("charlie", "alice"), ("charlie", "bob"),
                                ("alice", "bob"))):
        link = Link(f"l{i}", ends=(nodes[a], nodes[b]), env=env)
        net.install_link(link)
        link.install_channel(QuantumFiberChannel(
            f"q{i}", nodes[a], nodes[b], 1.0, loss_db_per_km=loss, env=env))
        link.install_channel(ClassicalFiberChannel(
            f"c{i}", nodes[a], nodes[b], 1.0, env=env))
    return nodes


@pytest.mark.parametrize("seed", range(5))
def test_teleport_delivers_prepared_state(seed):
    env = SimEnv("t", seed=seed)
    nodes = _teleport_net(env)
    theta = 0.3 + seed

    def prep(m, q):
        m.apply("ry", [q], params=(theta,))

    result = teleport(nodes["charlie"], nodes["alice"], nodes["bob"], prep)
    env.init()
    env.run()
    assert result.completed and not result.stalled
    target = np.array([np.cos(theta / 2), np.sin(theta / 2)])
    assert abs(np.vdot(target, result.bob_state().amps)) ** 2 == \
        pytest.approx(1.0, abs=1e-10)


def test_teleport_stalls_on_lost_qubit():
    env = SimEnv("t", seed=1)
    nodes = _teleport_net(env, lossy=True)  # 300 dB: photons never arrive
    result = teleport(nodes["charlie"], nodes["alice"], nodes["bob"],
                      lambda m, q: None, timeout_ps=10**9)
    env.init()
    env.run()
    assert result.stalled and not result.completed


# ---- end-to-end key distribution -----------------------------------------

def _run_kdn(seed=0, capacity=40, n_requests=3, key_num=5):
    env = SimEnv("kdn", seed=seed)
    network, endnodes = build_chain_network(env, n_repeaters=2,
                                            distance_km=1.0)
    kdn = KeyDistributionNetwork(network, endnodes, pool_capacity=capacity,
                                 keygen_rate=200.0)
    env.init()
    kdn.start()
    rng = env.rng_for("wl")
    requests = []
    for rid in range(n_requests):
        src, dst = rng.choice(endnodes, 2, replace=False)
        req = KeyRequest(id=rid, src=str(src), dst=str(dst), key_num=key_num)
        requests.append(req)
        kdn.schedule_request(int(rng.integers(0, 10**10)), req)
    env.run(end_time=2 * 10**11)
    return requests


def test_end_to_end_requests_complete_and_keys_agree():
    requests = _run_kdn()
    assert all(r.state == "done" for r in requests)
    for r in requests:
        assert r.src_keys == r.dst_keys
        assert len(r.src_keys) == r.key_num
        assert r.completed_ps >= r.issued_ps


def test_request_lifecycle_is_monotone():
    req = KeyRequest(id=0, src="A", dst="B")
    req.advance("accepted")
    req.advance("serving")
    req.advance("accepted")  # stale transition is ignored
    assert req.state == "serving"
    req.advance("done")
    assert req.state == "done"


def test_oversized_request_is_rejected():
    env = SimEnv("kdn", seed=0)
    network, endnodes = build_chain_network(env, n_repeaters=1,
                                            distance_km=1.0)
    kdn = KeyDistributionNetwork(network, endnodes, pool_capacity=10,
                                 keygen_rate=100.0)
    env.init()
    kdn.start()
    req = KeyRequest(id=0, src=endnodes[0], dst=endnodes[1], key_num=50)
    kdn.schedule_request(0, req)
    env.run(end_time=10**11)
    assert req.state == "rejected"
