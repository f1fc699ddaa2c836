"""The CHSH nonlocal game.

Referee rule: players win a round iff x*y == a XOR b.  The optimal
classical strategy (both always answer 0) wins exactly 3 of the 4
question pairs; the optimal quantum strategy on a shared Bell pair wins
with probability cos^2(pi/8) per question pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..backend import Circuit
from ..backend.simulator import branch_probabilities

CLASSICAL_OPTIMAL_WIN_RATE = 0.75
QUANTUM_OPTIMAL_WIN_RATE = float(np.cos(np.pi / 8) ** 2)


def chsh_referee(x, y, a, b) -> bool:
    return (x * y) == (a ^ b)


def chsh_circuit(x, y) -> Circuit:
    """Two-qubit circuit realizing the optimal quantum strategy.

    Register 0 is Alice's half of the Bell pair, register 1 Bob's.
    Alice measures Z (x=0) or X (x=1); Bob measures (Z+X)/sqrt(2) (y=0)
    or (Z-X)/sqrt(2) (y=1), realized as an ry basis rotation of -pi/4
    resp. +pi/4 before a computational measurement.
    """
    circ = Circuit()
    circ.add("h", 0).add("cnot", (0, 1))
    if x == 1:
        circ.add("h", 0)
    circ.add("ry", 1, params=(-np.pi / 4 if y == 0 else np.pi / 4,))
    circ.add("measure", 0).add("measure", 1)
    return circ


def chsh_quantum_probs(x, y) -> dict:
    """Exact outcome distribution {(a, b): p} for one question pair."""
    probs = branch_probabilities(chsh_circuit(x, y))
    return {(int(k[0]), int(k[1])): p for k, p in probs.items()}


@dataclass
class CHSHResult:
    strategy: str
    rounds: int
    wins: int

    @property
    def win_rate(self) -> float:
        return self.wins / self.rounds


def classical_win_rate_exhaustive() -> float:
    """Enumerate the always-answer-0 strategy over all four question pairs."""
    wins = sum(chsh_referee(x, y, 0, 0) for x in (0, 1) for y in (0, 1))
    return wins / 4


def chsh_play(strategy, rounds, rng=None, questions=None) -> CHSHResult:
    """Play `rounds` rounds; questions default to uniform random pairs.

    `questions` may pin a fixed (x, y) pair for conditional statistics.
    """
    if rounds <= 0:
        raise ValueError("rounds must be positive")
    rng = rng if rng is not None else np.random.default_rng(0)
    if questions is None:
        xs = rng.integers(0, 2, rounds)
        ys = rng.integers(0, 2, rounds)
    else:
        xs = np.full(rounds, questions[0])
        ys = np.full(rounds, questions[1])

    wins = 0
    if strategy == "classical-optimal":
        wins = int(sum(chsh_referee(x, y, 0, 0) for x, y in zip(xs, ys)))
    elif strategy == "quantum-optimal":
        outcome_pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
        for x in (0, 1):
            for y in (0, 1):
                mask = (xs == x) & (ys == y)
                n = int(mask.sum())
                if n == 0:
                    continue
                dist = chsh_quantum_probs(x, y)
                p = np.array([dist.get(ab, 0.0) for ab in outcome_pairs])
                draws = rng.choice(4, size=n, p=p / p.sum())
                for d in draws:
                    a, b = outcome_pairs[d]
                    wins += chsh_referee(x, y, a, b)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return CHSHResult(strategy=strategy, rounds=rounds, wins=int(wins))
