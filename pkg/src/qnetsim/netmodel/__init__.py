from .devices import PhotonSource, PolarizationDetector
from .channel import (
    Channel,
    ClassicalFiberChannel,
    QuantumFiberChannel,
    FreeSpaceChannel,
    survival_probability,
    classical_delay_ps,
    FIBER_LOSS_DB_PER_KM,
)
from .mobility import Mobility, triangular_trajectory
from .network import Network, Node, Link
from .topology import load_topology_from, TopologyError

__all__ = [
    "PhotonSource",
    "PolarizationDetector",
    "Channel",
    "ClassicalFiberChannel",
    "QuantumFiberChannel",
    "FreeSpaceChannel",
    "survival_probability",
    "classical_delay_ps",
    "FIBER_LOSS_DB_PER_KM",
    "Mobility",
    "triangular_trajectory",
    "Network",
    "Node",
    "Link",
    "load_topology_from",
    "TopologyError",
]
