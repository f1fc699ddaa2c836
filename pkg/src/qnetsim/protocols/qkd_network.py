"""End-to-end key distribution with key pools and trusted repeaters.

Endnodes run a four-layer stack (application, resource management,
routing, key generation); repeaters run the same stack without the
application layer.  Segment keys live in battery-like pools shared by
the two endpoints of each segment.  A repeater serves a request by
taking keys from its upstream and downstream pools and relaying the
one-time-pad ciphertext c = k_up XOR k_down to the destination, which
unwinds the chain of ciphertexts to recover the sender-side key.

Request lifecycle: the source issues a request toward the destination;
repeaters forward it (or reject it when it can never be satisfied); the
destination returns an acceptance; repeaters process or queue the
request depending on their pools; ciphertexts flow to the destination,
which acknowledges them, combines everything into the end-to-end key and
propagates a done message back to the source.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..des import Entity
from ..netmodel.channel import ClassicalFiberChannel, QuantumFiberChannel
from ..netmodel.network import Link, Network, Node
from .keypool import KeyPool
from .stack import Protocol, ProtocolStack


def xor_keys(a: str, b: str) -> str:
    if len(a) != len(b):
        raise ValueError("key lengths differ")
    return "".join("1" if x != y else "0" for x, y in zip(a, b))


def xor_key_lists(ka, kb):
    return [xor_keys(x, y) for x, y in zip(ka, kb)]


@dataclass
class KeyRequest:
    id: int
    src: str
    dst: str
    key_num: int = 10
    key_length: int = 32
    state: str = "issued"
    issued_ps: int = 0
    completed_ps: int | None = None
    path: list = field(default_factory=list)
    ciphertexts: dict = field(default_factory=dict)  # repeater name -> key list
    src_keys: list | None = None
    dst_keys: list | None = None

    _ORDER = ["issued", "accepted", "queued", "serving", "done"]

    def advance(self, state):
        if state in self._ORDER and self.state in self._ORDER:
            if self._ORDER.index(state) < self._ORDER.index(self.state):
                return  # lifecycle is monotone; ignore stale transitions
        self.state = state


class KeyGeneration(Protocol):
    """Bottom layer: generates segment keys into the neighbor pools.

    Generation runs as a steady event-driven loop at `rate` keys per
    second per pool (a full pool drops the key).  Every added key may
    flip a replenishing pool back to serving and wakes the resource
    managers waiting on the pool.
    """

    def __init__(self, name, rate=1000.0):
        super().__init__(name)
        self.rate = rate
        self.pools = {}  # neighbor name -> KeyPool (shared with the neighbor)

    @property
    def interval_ps(self) -> int:
        return round(1e12 / self.rate)

    def attach_pool(self, neighbor, pool):
        self.pools[neighbor] = pool

    def start_generation(self, neighbor):
        self.scheduler.schedule_after(self.interval_ps, self.node,
                                      "keygen_tick", self.name, neighbor)

    def tick(self, neighbor):
        self.pools[neighbor].add_key()
        self.scheduler.schedule_after(self.interval_ps, self.node,
                                      "keygen_tick", self.name, neighbor)


class QKDRouting(Protocol):
    """Static shortest-path routing layer."""

    def next_hop(self, dst_name):
        network = self.node.network
        return network.next_hop(self.node.name, dst_name)

    def forward(self, msg, toward):
        hop = self.next_hop(toward)
        if hop is None:
            raise RuntimeError(f"no route from {self.node.name!r} to {toward!r}")
        self.node.send_classical_msg(self.node.network.node(hop), msg)

    def handle_lower(self, sender, msg, **kwargs):
        self.send_upper(msg)


class QKDRMP(Protocol):
    """Resource management: request queue and pool coordination."""

    def __init__(self, name):
        super().__init__(name)
        self.queue = []  # FIFO of queued KeyRequests (repeater role)
        self.waiting_local = []  # endnode requests waiting for segment keys

    # --- helpers ---------------------------------------------------------
    @property
    def routing(self) -> QKDRouting:
        return next(p for p in self.lower if isinstance(p, QKDRouting))

    @property
    def keygen(self) -> KeyGeneration:
        return next(p for p in self.routing.lower if isinstance(p, KeyGeneration))

    def pool_toward(self, neighbor) -> KeyPool:
        return self.keygen.pools[neighbor]

    def _segment_neighbors(self, request):
        """(upstream, downstream) neighbors of this node on the path."""
        path = request.path
        i = path.index(self.node.name)
        up = path[i - 1] if i > 0 else None
        down = path[i + 1] if i < len(path) - 1 else None
        return up, down

    # --- request initiation (source side) --------------------------------
    def initiate(self, request: KeyRequest):
        request.issued_ps = self.env.now
        path = self.node.network.route(self.node.name, request.dst)
        if path is None:
            request.state = "unreachable"
            return
        request.path = path
        self.routing.forward({"type": "REQUEST", "request": request}, request.dst)

    # --- message handling ------------------------------------------------
    def handle_classical(self, msg, src):
        request = msg["request"]
        handler = getattr(self, f"_on_{msg['type'].lower()}")
        handler(request, msg)

    def _is_repeater_for(self, request):
        name = self.node.name
        return name in request.path and name not in (request.src, request.dst)

    def _on_request(self, request, msg):
        name = self.node.name
        if name == request.dst:
            request.advance("accepted")
            self.routing.forward({"type": "ACCEPT", "request": request}, request.src)
            self._take_local_segment(request, role="dst")
            return
        # forward-or-reject at a repeater: fail fast when no on-path pool
        # could ever hold enough keys
        up, down = self._segment_neighbors(request)
        for neighbor in (up, down):
            if request.key_num > self.pool_toward(neighbor).v_max:
                self.routing.forward({"type": "REJECT", "request": request},
                                     request.src)
                return
        self.routing.forward(msg, request.dst)

    def _on_reject(self, request, msg):
        if self.node.name == request.src:
            request.state = "rejected"
            self._notify_app(request)
        else:
            self.routing.forward(msg, request.src)

    def _on_accept(self, request, msg):
        name = self.node.name
        if self._is_repeater_for(request):
            self.routing.forward(msg, request.src)
            request.advance("queued")
            self.queue.append(request)
            self.try_process()
            return
        if name == request.src:
            # take this end's segment keys; wait on backpressure
            self._take_local_segment(request, role="src")

    def _take_local_segment(self, request, role):
        done_already = request.src_keys if role == "src" else request.dst_keys
        if done_already is not None or (request, role) in self.waiting_local:
            return
        neighbor = request.path[1] if role == "src" else request.path[-2]
        pool = self.pool_toward(neighbor)
        keys = pool.take_for(request.id, request.key_num)
        if keys is None:
            self.waiting_local.append((request, role))
            return
        if role == "src":
            request.src_keys = keys
        else:
            request.dst_keys = keys
            self._try_complete_dst(request)

    # --- repeater processing ---------------------------------------------
    def try_process(self):
        while self.queue:
            request = self.queue[0]
            up, down = self._segment_neighbors(request)
            pool_up = self.pool_toward(up)
            pool_down = self.pool_toward(down)
            if not (self._available(pool_up, request) and
                    self._available(pool_down, request)):
                return
            self.queue.pop(0)
            request.advance("serving")
            k_up = pool_up.take_for(request.id, request.key_num)
            k_down = pool_down.take_for(request.id, request.key_num)
            cipher = xor_key_lists(k_up, k_down)
            self.routing.forward({"type": "CIPHERTEXT", "request": request,
                                  "repeater": self.node.name,
                                  "cipher": cipher}, request.dst)

    @staticmethod
    def _available(pool, request):
        return request.id in pool._reservations or pool.can_serve(request.key_num)

    # --- destination side -------------------------------------------------
    def _on_ciphertext(self, request, msg):
        if self.node.name != request.dst:
            self.routing.forward(msg, request.dst)
            return
        request.ciphertexts[msg["repeater"]] = msg["cipher"]
        self.routing.forward({"type": "ACK", "request": request,
                              "repeater": msg["repeater"]}, msg["repeater"])
        if request.dst_keys is None:
            self._take_local_segment(request, role="dst")
        else:
            self._try_complete_dst(request)

    def _on_ack(self, request, msg):
        if self.node.name != msg["repeater"]:
            self.routing.forward(msg, msg["repeater"])

    def _try_complete_dst(self, request):
        repeaters = request.path[1:-1]
        if request.dst_keys is None or any(r not in request.ciphertexts
                                           for r in repeaters):
            return
        keys = request.dst_keys
        for repeater in reversed(repeaters):
            keys = xor_key_lists(keys, request.ciphertexts[repeater])
        request.dst_keys = keys  # now equals the source-side segment keys
        self.routing.forward({"type": "DONE", "request": request}, request.src)

    def _on_done(self, request, msg):
        if self.node.name != request.src:
            self.routing.forward(msg, request.src)
            return
        request.advance("done")
        request.completed_ps = self.env.now
        self._notify_app(request)

    def _notify_app(self, request):
        self.send_upper({"type": "REQUEST_FINISHED", "request": request})

    # --- pool recovery ----------------------------------------------------
    def pool_recovered(self, pool=None):
        self.try_process()
        still_waiting = []
        for request, role in self.waiting_local:
            neighbor = request.path[1] if role == "src" else request.path[-2]
            keys = self.pool_toward(neighbor).take_for(request.id, request.key_num)
            if keys is None:
                still_waiting.append((request, role))
            elif role == "src":
                request.src_keys = keys
            else:
                request.dst_keys = keys
                self._try_complete_dst(request)
        self.waiting_local = still_waiting

    def handle_lower(self, sender, msg, **kwargs):
        if msg.get("type") == "POOL_RECOVERED":
            self.pool_recovered()


class QKDApp(Protocol):
    """Top layer on endnodes: issues requests and collects completions."""

    def __init__(self, name):
        super().__init__(name)
        self.issued = []
        self.finished = []

    @property
    def rmp(self) -> QKDRMP:
        return next(p for p in self.lower if isinstance(p, QKDRMP))

    def issue(self, request: KeyRequest):
        self.issued.append(request)
        self.rmp.initiate(request)

    def handle_lower(self, sender, msg, **kwargs):
        if msg.get("type") == "REQUEST_FINISHED":
            self.finished.append(msg["request"])


def build_stack(node_name, is_endnode, keygen_rate):
    """Four layers for endnodes, three for repeaters."""
    rmp = QKDRMP(f"{node_name}.rmp")
    routing = QKDRouting(f"{node_name}.routing")
    keygen = KeyGeneration(f"{node_name}.keygen", rate=keygen_rate)
    stack = ProtocolStack(f"{node_name}.stack")
    relations = [(rmp, routing), (routing, keygen)]
    if is_endnode:
        app = QKDApp(f"{node_name}.app")
        relations.insert(0, (app, rmp))
    stack.build(relations)
    return stack


class QKDNode(Node):
    """Node that dispatches key-distribution traffic to its stack."""

    def receive_classical_msg(self, msg, src):
        for proto in self.stack.protocols:
            if isinstance(proto, QKDRMP):
                proto.handle_classical(msg, src)

    def keygen_tick(self, keygen_name, neighbor):
        for proto in self.stack.protocols:
            if isinstance(proto, KeyGeneration) and proto.name == keygen_name:
                proto.tick(neighbor)


class KeyDistributionNetwork:
    """A network plus shared segment pools and per-node stacks."""

    def __init__(self, network: Network, endnodes, pool_capacity=40,
                 key_length=32, keygen_rate=1000.0):
        self.network = network
        self.endnodes = list(endnodes)
        self.pools = {}
        env = network.env
        for node in network.nodes:
            node.load_protocol(build_stack(node.name,
                                           node.name in self.endnodes,
                                           keygen_rate))
        for link in network.links:
            if not any(isinstance(c, QuantumFiberChannel) for c in link.channels):
                continue
            a, b = link.ends
            pool = KeyPool(pool_capacity, key_length=key_length,
                           rng=env.rng_for(f"pool:{a.name}:{b.name}"),
                           name=f"{a.name}~{b.name}")
            pool.fill()
            self.pools[frozenset((a.name, b.name))] = pool
            for node, neighbor in ((a, b.name), (b, a.name)):
                self._keygen_of(node).attach_pool(neighbor, pool)
                pool.on_add.append(self._rmp_of(node).pool_recovered)

    @staticmethod
    def _keygen_of(node) -> KeyGeneration:
        return next(p for p in node.stack.protocols
                    if isinstance(p, KeyGeneration))

    @staticmethod
    def _rmp_of(node) -> QKDRMP:
        return next(p for p in node.stack.protocols if isinstance(p, QKDRMP))

    def start(self):
        """Launch one generation loop per pool; call after env.init()."""
        for key in sorted(self.pools, key=sorted):
            a_name, _b_name = sorted(key)
            node = self.network.node(a_name)
            other = (set(key) - {a_name}).pop()
            self._keygen_of(node).start_generation(other)

    def app_of(self, name) -> QKDApp:
        node = self.network.node(name)
        return next(p for p in node.stack.protocols if isinstance(p, QKDApp))

    def issue_request(self, request: KeyRequest):
        self.app_of(request.src).issue(request)

    def schedule_request(self, time_ps, request: KeyRequest):
        env = self.network.env
        env.schedule_at(time_ps, _RequestIssuer(self, request, env), "fire")

    def requests_finished(self):
        out = []
        for name in self.endnodes:
            out.extend(self.app_of(name).finished)
        return out


class _RequestIssuer:
    """Tiny event owner that injects a request at its start time."""

    def __init__(self, kdn, request, env):
        self.kdn = kdn
        self.request = request
        self.name = f"issuer:{request.id}"

    def fire(self):
        self.kdn.issue_request(self.request)


def build_chain_network(env, n_repeaters=2, extra_endnodes=(),
                        distance_km=10.0) -> tuple:
    """Chain A - R1 - ... - Rn - B with optional endnodes hung off
    repeaters: extra_endnodes is a list of (endnode_name, repeater_index).

    Returns (network, endnode names).
    """
    network = Network("kdnet", env=env)
    names = ["A"] + [f"R{i+1}" for i in range(n_repeaters)] + ["B"]
    nodes = {}
    for name in names:
        nodes[name] = QKDNode(name, env=env)
        network.install_node(nodes[name])
    endnodes = ["A", "B"]
    for ename, rep_idx in extra_endnodes:
        nodes[ename] = QKDNode(ename, env=env)
        network.install_node(nodes[ename])
        endnodes.append(ename)

    def connect(a, b):
        link = Link(f"{a}-{b}", ends=(nodes[a], nodes[b]), env=env)
        network.install_link(link)
        for s, r in ((a, b), (b, a)):
            link.install_channel(ClassicalFiberChannel(
                f"c:{s}->{r}", nodes[s], nodes[r], distance_km, env=env))
        link.install_channel(QuantumFiberChannel(
            f"q:{a}->{b}", nodes[a], nodes[b], distance_km, env=env))

    for a, b in zip(names, names[1:]):
        connect(a, b)
    for ename, rep_idx in extra_endnodes:
        connect(ename, f"R{rep_idx+1}")
    return network, endnodes
