"""Network, nodes and links.

A Network owns nodes and links and computes static shortest-path
(minimum hop) routing tables at initialization, separately for the
classical and quantum channel graphs.  Equal-length alternatives are
broken toward the lexicographically smallest next hop.
"""

from __future__ import annotations

from collections import deque

from ..des import Entity
from .channel import Channel, ClassicalFiberChannel, QuantumFiberChannel


class Node(Entity):
    def __init__(self, name, env=None, location=None):
        super().__init__(name, env)
        self.devices = {}
        self.stack = None
        self.location = location
        self.mobility = None
        self.network = None

    def install_device(self, device):
        if device.name in self.devices:
            raise ValueError(f"duplicate device name {device.name!r} on node {self.name!r}")
        self.devices[device.name] = device
        self.install(device)

    def device_of_kind(self, cls):
        for device in self.devices.values():
            if isinstance(device, cls):
                return device
        return None

    def load_protocol(self, stack):
        self.stack = stack
        stack.owner_node = self

    def load_mobility(self, mobility):
        self.mobility = mobility

    # ---- messaging ------------------------------------------------------
    def channel_to(self, dst, kind=ClassicalFiberChannel):
        if self.network is None:
            raise RuntimeError(f"node {self.name!r} is not installed in a network")
        return self.network.channel_between(self, dst, kind)

    def send_classical_msg(self, dst, msg):
        self.channel_to(dst, ClassicalFiberChannel).transmit(msg, src=self)

    def send_quantum_msg(self, dst, qubit):
        self.channel_to(dst, QuantumFiberChannel).transmit(qubit, src=self)

    def receive_classical_msg(self, msg, src):
        if self.stack is not None:
            self.stack.handle_classical(msg, src)

    def receive_quantum_msg(self, qubit, src):
        if self.stack is not None:
            self.stack.handle_quantum(qubit, src)


class Link(Entity):
    def __init__(self, name, ends=None, env=None):
        super().__init__(name, env)
        self.ends = tuple(ends) if ends else None
        self.channels = []

    def connect(self, a, b):
        self.ends = (a, b)

    def install_channel(self, channel: Channel):
        if self.ends is None:
            raise RuntimeError(f"link {self.name!r} has no endpoints")
        if {channel.sender, channel.receiver} - set(self.ends):
            raise ValueError(
                f"channel {channel.name!r} endpoints are not the ends of link {self.name!r}")
        self.channels.append(channel)
        self.install(channel)


class Network(Entity):
    def __init__(self, name, env=None):
        super().__init__(name, env)
        self.nodes = []
        self.links = []
        self.classical_routes = {}
        self.quantum_routes = {}

    def install_node(self, node: Node):
        if any(n.name == node.name for n in self.nodes):
            raise ValueError(f"duplicate node name {node.name!r}")
        node.network = self
        self.nodes.append(node)
        self.install(node)

    def install_link(self, link: Link):
        for end in link.ends:
            if end not in self.nodes:
                raise ValueError(
                    f"link {link.name!r} endpoint {end.name!r} is not installed")
        self.links.append(link)
        self.install(link)

    def node(self, name) -> Node:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(f"no node named {name!r}")

    def channel_between(self, src, dst, kind):
        for link in self.links:
            if set(link.ends) == {src, dst}:
                for ch in link.channels:
                    if isinstance(ch, kind) and ch.sender is src and ch.receiver is dst:
                        return ch
        raise LookupError(
            f"no {kind.__name__} from {src.name!r} to {dst.name!r}")

    # ---- routing --------------------------------------------------------
    def _adjacency(self, kind):
        adj = {n.name: set() for n in self.nodes}
        for link in self.links:
            for ch in link.channels:
                if isinstance(ch, kind):
                    adj[ch.sender.name].add(ch.receiver.name)
        return adj

    @staticmethod
    def _distances_to(adj, dst):
        dist = {dst: 0}
        queue = deque([dst])
        # BFS over reversed edges: dist[v] = hops from v to dst
        reverse = {v: set() for v in adj}
        for u, outs in adj.items():
            for v in outs:
                reverse[v].add(u)
        while queue:
            v = queue.popleft()
            for u in reverse[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist

    def _routes(self, kind):
        adj = self._adjacency(kind)
        routes = {}
        for dst in adj:
            dist = self._distances_to(adj, dst)
            for src in adj:
                if src == dst or src not in dist:
                    continue
                hops = [n for n in adj[src] if dist.get(n, float("inf")) == dist[src] - 1]
                routes[(src, dst)] = min(hops)  # lexicographic tie-break
        return routes

    def compute_routes(self):
        self.classical_routes = self._routes(ClassicalFiberChannel)
        self.quantum_routes = self._routes(QuantumFiberChannel)

    def next_hop(self, src, dst, quantum=False) -> str | None:
        table = self.quantum_routes if quantum else self.classical_routes
        return table.get((src, dst))

    def route(self, src, dst, quantum=False):
        """Full node-name path src..dst, or None when unreachable."""
        if src == dst:
            return [src]
        path = [src]
        cur = src
        while cur != dst:
            nxt = self.next_hop(cur, dst, quantum)
            if nxt is None:
                return None
            path.append(nxt)
            cur = nxt
        return path

    def _init(self):
        self.compute_routes()
