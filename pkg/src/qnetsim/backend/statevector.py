"""Dense statevector over n qubits.

Amplitude indexing is little-endian: register 0 is the least significant
bit of the amplitude index.
"""

from __future__ import annotations

import numpy as np

NORM_TOL = 1e-10

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)


class StateVector:
    def __init__(self, n=0, amplitudes=None):
        if amplitudes is not None:
            amplitudes = np.asarray(amplitudes, dtype=complex).reshape(-1)
            size = amplitudes.size
            n = int(np.log2(size)) if size else 0
            if 2**n != size:
                raise ValueError(f"amplitude length {size} is not a power of two")
            self.amps = amplitudes.copy()
        else:
            self.amps = np.zeros(2**n, dtype=complex)
            self.amps[0] = 1.0
        self.n = n

    def copy(self) -> "StateVector":
        return StateVector(amplitudes=self.amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def check_norm(self):
        if abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {self.norm()} deviates from 1")

    # ---- composition ----------------------------------------------------
    def append_qubit(self, single=KET0):
        """Tensor a fresh qubit onto the state as the new highest register."""
        self.amps = np.kron(np.asarray(single, dtype=complex), self.amps)
        self.n += 1

    def grow_to(self, n):
        while self.n < n:
            self.append_qubit()

    # ---- unitaries ------------------------------------------------------
    def apply(self, matrix: np.ndarray, targets):
        """Apply a k-qubit unitary to the given registers (control first)."""
        targets = list(targets)
        k = len(targets)
        if len(set(targets)) != k:
            raise ValueError("target registers must be distinct")
        for q in targets:
            if not 0 <= q < self.n:
                raise ValueError(f"register {q} out of range for {self.n} qubits")
        psi = self.amps.reshape((2,) * self.n)
        axes = [self.n - 1 - q for q in targets]
        u = np.asarray(matrix, dtype=complex).reshape((2,) * (2 * k))
        psi = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), axes))
        psi = np.moveaxis(psi, list(range(k)), axes)
        self.amps = np.ascontiguousarray(psi).reshape(-1)

    # ---- measurement ----------------------------------------------------
    def prob_one(self, reg) -> float:
        psi = self.amps.reshape((2,) * self.n)
        axis = self.n - 1 - reg
        slice1 = np.take(psi, 1, axis=axis)
        return float(np.vdot(slice1, slice1).real)

    def project(self, reg, bit) -> float:
        """Collapse the register to `bit`; returns the branch probability."""
        psi = self.amps.reshape((2,) * self.n)
        axis = self.n - 1 - reg
        other = np.take(psi, 1 - bit, axis=axis)
        p_other = float(np.vdot(other, other).real)
        p = 1.0 - p_other
        if p <= 0.0:
            raise ValueError(f"projection onto outcome {bit} has zero probability")
        indexer = [slice(None)] * self.n
        indexer[axis] = 1 - bit
        psi = psi.copy()
        psi[tuple(indexer)] = 0.0
        self.amps = psi.reshape(-1) / np.sqrt(p)
        return p

    def sample_bit(self, reg, rng) -> int:
        p1 = self.prob_one(reg)
        bit = int(rng.random() < p1)
        self.project(reg, bit)
        return bit

    def remove_qubit(self, reg, bit):
        """Drop a collapsed register (must be in the product state |bit>)."""
        psi = self.amps.reshape((2,) * self.n)
        axis = self.n - 1 - reg
        self.amps = np.ascontiguousarray(np.take(psi, bit, axis=axis)).reshape(-1)
        self.n -= 1

    # ---- comparisons ----------------------------------------------------
    def fidelity(self, other: "StateVector") -> float:
        if self.n != other.n:
            raise ValueError("fidelity requires equal qubit counts")
        return float(abs(np.vdot(self.amps, other.amps)) ** 2)

    def equals_up_to_phase(self, other: "StateVector", tol=NORM_TOL) -> bool:
        return self.n == other.n and 1.0 - self.fidelity(other) < tol

    def __repr__(self):
        return f"StateVector(n={self.n})"
