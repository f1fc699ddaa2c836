"""MBQC execution with vertex dynamic classification.

Vertices move through pending -> active -> measured.  A qubit is only
allocated when its vertex activates, and the qubit of a measured vertex
is dropped from the background state immediately, keeping the effective
width at the number of active vertices.

Before measuring a vertex, every still-unrealized incident edge is
realized as a CZ (activating pending endpoints first) and recorded in an
edge ledger, so each edge of the graph contributes exactly one CZ over
the whole run regardless of measurement order.
"""

from __future__ import annotations

import numpy as np

from ..backend.gates import gate_matrix
from ..backend.statevector import PLUS, StateVector
from .pattern import MeasurementSpec, ResourceGraph, VertexSets

DENSE_ORACLE_MAX_VERTICES = 16

_CZ = gate_matrix("cz")


def _check_order(graph: ResourceGraph, order, specs=None):
    if sorted(map(str, order)) != sorted(map(str, graph.vertices)):
        raise ValueError("measurement order must be a permutation of the vertices")
    if specs is not None:
        earlier = set()
        for v in order:
            for ref in specs[v].references():
                if ref not in earlier:
                    raise ValueError(
                        f"measurement of {v!r} adapts on {ref!r}, which is not measured earlier")
            earlier.add(v)


class _BackgroundState:
    """Statevector over the currently active vertices."""

    def __init__(self, graph: ResourceGraph):
        if graph.input_state is not None:
            self.state = graph.input_state.copy()
            self.active = list(graph.input_vertices)
        else:
            self.state = StateVector(0)
            self.active = []

    def activate(self, vertex):
        self.state.append_qubit(PLUS)
        self.active.append(vertex)

    def position(self, vertex):
        return self.active.index(vertex)

    def cz(self, u, v):
        self.state.apply(_CZ, (self.position(u), self.position(v)))

    def measure(self, vertex, basis, rng=None, forced_bit=None):
        """Measure in the given basis and drop the qubit.

        Returns (bit, probability).  With `forced_bit` the outcome is
        projected rather than sampled (used by the branch enumerator).
        """
        v0, v1 = basis
        pos = self.position(vertex)
        rotation = np.array([v0.conj(), v1.conj()])  # maps v0 -> |0>, v1 -> |1>
        self.state.apply(rotation, (pos,))
        if forced_bit is None:
            p1 = self.state.prob_one(pos)
            bit = int(rng.random() < p1)
            prob = p1 if bit else 1.0 - p1
            self.state.project(pos, bit)
        else:
            bit = forced_bit
            p1 = self.state.prob_one(pos)
            prob = p1 if bit else 1.0 - p1
            if prob < 1e-14:
                return bit, 0.0
            self.state.project(pos, bit)
        self.state.remove_qubit(pos, bit)
        self.active.pop(pos)
        return bit, prob

    def copy(self):
        clone = _BackgroundState.__new__(_BackgroundState)
        clone.state = self.state.copy()
        clone.active = list(self.active)
        return clone


def _prepare_step(graph, background, sets, ledger, k):
    """Activate k and realize its unrealized incident edges."""
    if k in sets.pending:
        sets.pending.remove(k)
        sets.active.append(k)
        if background is not None:
            background.activate(k)
    for j in sorted(graph.neighbors(k), key=str):
        edge = frozenset((j, k))
        if edge in ledger:
            continue
        if j in sets.pending:
            sets.pending.remove(j)
            sets.active.append(j)
            if background is not None:
                background.activate(j)
        if background is not None:
            background.cz(j, k)
        ledger.add(edge)


def _initial_sets(graph: ResourceGraph) -> VertexSets:
    inputs = set(graph.input_vertices)
    return VertexSets(pending=[v for v in graph.vertices if v not in inputs],
                      active=list(graph.input_vertices), measured=[])


def run_pattern(graph: ResourceGraph, order, specs: dict, rng) -> dict:
    """Execute the pattern; returns {vertex: outcome bit}."""
    _check_order(graph, order, specs)
    sets = _initial_sets(graph)
    background = _BackgroundState(graph)
    ledger = set()
    outcomes = {}
    for k in order:
        _prepare_step(graph, background, sets, ledger, k)
        bit, _ = background.measure(k, specs[k].basis(outcomes), rng=rng)
        outcomes[k] = bit
        sets.active.remove(k)
        sets.measured.append(k)
    return outcomes


def max_active_width(graph: ResourceGraph, order) -> int:
    """Peak number of simultaneously active vertices; no state allocation."""
    _check_order(graph, order)
    sets = _initial_sets(graph)
    ledger = set()
    peak = len(sets.active)
    for k in order:
        _prepare_step(graph, None, sets, ledger, k)
        peak = max(peak, len(sets.active))
        sets.active.remove(k)
        sets.measured.append(k)
    return peak


def sample_pattern(graph: ResourceGraph, order, specs: dict, shots: int,
                   rng) -> dict:
    """Empirical outcome counts for `shots` independent pattern runs.

    Stratified sampling: at every measurement the remaining shots are
    split binomially between the two outcomes, so the counts follow
    exactly the same law as `shots` separate run_pattern calls while the
    state evolution happens once per realized branch instead of once per
    shot.  Keys are outcome bitstrings in measurement order.
    """
    _check_order(graph, order, specs)
    counts = {}

    def walk(i, background, sets, ledger, outcomes, n):
        if n == 0:
            return
        if i == len(order):
            counts["".join(str(outcomes[v]) for v in order)] = n
            return
        k = order[i]
        _prepare_step(graph, background, sets, ledger, k)
        sets.active.remove(k)
        sets.measured.append(k)
        basis = specs[k].basis(outcomes)
        v0, v1 = basis
        pos = background.position(k)
        rotated = background.copy()
        rotated.state.apply(np.array([v0.conj(), v1.conj()]), (pos,))
        p1 = rotated.state.prob_one(pos)
        n1 = int(rng.binomial(n, p1)) if 0.0 < p1 < 1.0 else (n if p1 >= 1.0 else 0)
        for bit, n_bit in ((0, n - n1), (1, n1)):
            if n_bit == 0:
                continue
            branch = background.copy()
            branch.measure(k, basis, forced_bit=bit)
            outcomes[k] = bit
            walk(i + 1, branch, _copy_sets(sets), set(ledger), outcomes, n_bit)
            del outcomes[k]

    walk(0, _BackgroundState(graph), _initial_sets(graph), set(), {}, shots)
    return counts


def _copy_sets(sets: VertexSets) -> VertexSets:
    return VertexSets(pending=list(sets.pending), active=list(sets.active),
                      measured=list(sets.measured))


def dense_oracle(graph: ResourceGraph, specs: dict, order) -> dict:
    """Exact outcome distribution by full-state branch enumeration.

    Builds the complete entangled resource state up front (input state
    tensored with |+> vertices, one CZ per edge) and recursively branches
    over both outcomes of every measurement.  Keys are outcome bitstrings
    in measurement order.
    """
    _check_order(graph, order, specs)
    if len(graph) > DENSE_ORACLE_MAX_VERTICES:
        raise ValueError(f"graph with {len(graph)} vertices exceeds the "
                         f"{DENSE_ORACLE_MAX_VERTICES}-vertex enumeration limit")
    background = _BackgroundState(graph)
    for v in graph.vertices:
        if v not in background.active:
            background.activate(v)
    for edge in graph.edges:
        a, b = tuple(edge)
        background.cz(a, b)

    dist = {}

    def walk(i, state, outcomes, prob):
        if i == len(order):
            dist["".join(str(outcomes[v]) for v in order)] = prob
            return
        k = order[i]
        basis = specs[k].basis(outcomes)
        for bit in (0, 1):
            branch = state.copy()
            _, p = branch.measure(k, basis, forced_bit=bit)
            if p < 1e-14:
                continue
            outcomes[k] = bit
            walk(i + 1, branch, outcomes, prob * p)
            del outcomes[k]

    walk(0, background, {}, 1.0)
    return dist
