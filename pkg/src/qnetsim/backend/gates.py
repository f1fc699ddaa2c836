"""Gate matrices for the statevector engine.

Two-qubit matrices act on the basis |control, target> (control is the
first register in the instruction).  Controlled rotation/Pauli variants
exist so that circuits produced by measurement deferral stay executable.
"""

from __future__ import annotations

import numpy as np

_SQ2 = 1.0 / np.sqrt(2.0)

_FIXED_1Q = {
    "h": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "t": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
}


def _rx(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta):
    return np.array([[np.exp(-1j * theta / 2), 0],
                     [0, np.exp(1j * theta / 2)]], dtype=complex)


_PARAM_1Q = {"rx": _rx, "ry": _ry, "rz": _rz}


def _controlled(u2):
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = u2
    return m


_FIXED_2Q = {
    "cnot": _controlled(_FIXED_1Q["x"]),
    "cz": _controlled(_FIXED_1Q["z"]),
    "cy": _controlled(_FIXED_1Q["y"]),
    "swap": np.array([[1, 0, 0, 0],
                      [0, 0, 1, 0],
                      [0, 1, 0, 0],
                      [0, 0, 0, 1]], dtype=complex),
}

_PARAM_2Q = {
    "crx": lambda t: _controlled(_rx(t)),
    "cry": lambda t: _controlled(_ry(t)),
    "crz": lambda t: _controlled(_rz(t)),
}

GATE_NAMES = (frozenset(_FIXED_1Q) | frozenset(_PARAM_1Q)
              | frozenset(_FIXED_2Q) | frozenset(_PARAM_2Q) | {"measure"})

# classically-conditioned gate -> quantum-controlled counterpart
_CONTROLLED_NAME = {
    "x": "cnot",
    "y": "cy",
    "z": "cz",
    "rx": "crx",
    "ry": "cry",
    "rz": "crz",
}


def controlled_name(name: str) -> str:
    """Controlled counterpart used by measurement deferral."""
    try:
        return _CONTROLLED_NAME[name]
    except KeyError:
        raise ValueError(f"gate {name!r} has no controlled counterpart") from None


def gate_arity(name: str) -> int:
    if name in _FIXED_1Q or name in _PARAM_1Q or name == "measure":
        return 1
    if name in _FIXED_2Q or name in _PARAM_2Q:
        return 2
    raise ValueError(f"unknown gate {name!r}")


def gate_matrix(name: str, params=None) -> np.ndarray:
    if name in _FIXED_1Q:
        _check_no_params(name, params)
        return _FIXED_1Q[name]
    if name in _FIXED_2Q:
        _check_no_params(name, params)
        return _FIXED_2Q[name]
    if name in _PARAM_1Q or name in _PARAM_2Q:
        if not params or len(params) != 1:
            raise ValueError(f"gate {name!r} takes exactly one angle parameter")
        table = _PARAM_1Q if name in _PARAM_1Q else _PARAM_2Q
        return table[name](params[0])
    raise ValueError(f"unknown gate {name!r}")


def _check_no_params(name, params):
    if params:
        raise ValueError(f"gate {name!r} takes no parameters")
