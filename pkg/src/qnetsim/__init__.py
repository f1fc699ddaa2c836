"""qnetsim: a discrete-event quantum network simulation toolkit.

The package bundles a deterministic discrete-event engine (`qnetsim.des`),
a statevector circuit engine (`qnetsim.backend`), a measurement-based
quantum computation engine (`qnetsim.mbqc`), a network model with
photon-level devices (`qnetsim.netmodel`), protocol implementations
(`qnetsim.protocols`) and a compiler that lowers multi-party network
protocols to standard quantum circuits (`qnetsim.compiler`).
"""

__version__ = "0.1.0"
