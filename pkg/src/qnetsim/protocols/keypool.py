"""Battery-like key pools between directly connected stations.

A pool holds up to V_m keys.  Delivering keys that drive the current
volume below the interruption threshold V_i switches the pool to
replenishing: it stops serving and generates keys until the recovery
threshold V_r is reached.  Defaults follow V_i = V_m / 4 and V_r = V_m.
"""

from __future__ import annotations

from collections import deque

import numpy as np


class KeyPool:
    def __init__(self, v_max, key_length=32, v_interrupt=None, v_recover=None,
                 rng=None, name=""):
        if v_max <= 0:
            raise ValueError("pool capacity must be positive")
        self.name = name
        self.v_max = int(v_max)
        self.v_interrupt = int(v_interrupt) if v_interrupt is not None else self.v_max // 4
        self.v_recover = int(v_recover) if v_recover is not None else self.v_max
        if not (0 <= self.v_interrupt <= self.v_recover <= self.v_max):
            raise ValueError("thresholds must satisfy 0 <= V_i <= V_r <= V_m")
        self.key_length = key_length
        self.keys = deque()
        self.status = "serving"
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.generated = 0
        self.delivered = 0
        self._reservations = {}  # request id -> delivered keys, readable once more
        self.on_interrupt = None  # callback(pool) when service stops
        self.on_recover = []  # callbacks(pool) when service resumes
        self.on_add = []  # callbacks(pool) after every added key

    @property
    def v_current(self) -> int:
        return len(self.keys)

    def fill(self, count=None):
        for _ in range(self.v_max if count is None else count):
            self.add_key(self._new_key())
        return self

    def _new_key(self):
        bits = self.rng.integers(0, 2, self.key_length)
        return "".join(map(str, bits))

    def add_key(self, key=None):
        if self.v_current >= self.v_max:
            return False
        self.keys.append(key if key is not None else self._new_key())
        self.generated += 1
        if self.status == "replenishing" and self.v_current >= self.v_recover:
            self.status = "serving"
            for callback in self.on_recover:
                callback(self)
        for callback in self.on_add:
            callback(self)
        return True

    def can_serve(self, count) -> bool:
        return self.status == "serving" and self.v_current >= count

    def deliver(self, count):
        """Pop `count` keys, or None as a backpressure signal.

        Dropping below V_i afterwards switches the pool to replenishing.
        """
        if count > self.v_max:
            raise ValueError(
                f"request for {count} keys exceeds pool capacity {self.v_max}")
        if not self.can_serve(count):
            return None
        keys = [self.keys.popleft() for _ in range(count)]
        self.delivered += count
        if self.v_current < self.v_interrupt:
            self.status = "replenishing"
            if self.on_interrupt is not None:
                self.on_interrupt(self)
        return keys

    def take_for(self, request_id, count):
        """Deliver keys once per request; the second endpoint of the
        segment reads the same keys and clears the reservation."""
        if request_id in self._reservations:
            return self._reservations.pop(request_id)
        keys = self.deliver(count)
        if keys is not None:
            self._reservations[request_id] = list(keys)
            return list(keys)
        return None

    def __repr__(self):
        return (f"KeyPool({self.name!r}, Vc={self.v_current}/{self.v_max}, "
                f"{self.status})")
