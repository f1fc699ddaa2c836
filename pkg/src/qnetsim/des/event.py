"""Events and the future event list.

Simulation time is a non-negative integer number of picoseconds.  Events
are totally ordered by (time, priority, seq): lower priority values are
more urgent, and seq is a global insertion counter that makes ties
deterministic.
"""

from __future__ import annotations

import heapq
import warnings


class Event:
    """A scheduled change of system status at a particular time.

    The handler is an owning object plus a named action: executing the
    event calls ``getattr(owner, action)(*args, **kwargs)``.
    """

    __slots__ = ("time", "priority", "seq", "owner", "action", "args",
                 "kwargs", "cancelled", "executed")

    def __init__(self, time, owner, action, args=(), kwargs=None, priority=0):
        if time < 0:
            raise ValueError(f"event time must be non-negative, got {time}")
        self.time = int(time)
        self.priority = priority
        self.seq = None  # assigned by the environment at scheduling
        self.owner = owner
        self.action = action
        self.args = tuple(args)
        self.kwargs = dict(kwargs) if kwargs else {}
        self.cancelled = False
        self.executed = False

    @property
    def sort_key(self):
        return (self.time, self.priority, self.seq)

    @property
    def handler_name(self):
        owner_name = getattr(self.owner, "name", type(self.owner).__name__)
        return f"{owner_name}.{self.action}"

    def execute(self):
        if self.executed or self.cancelled:
            raise RuntimeError(f"event {self.handler_name} already consumed")
        self.executed = True
        getattr(self.owner, self.action)(*self.args, **self.kwargs)

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __repr__(self):
        return (f"Event(t={self.time}, prio={self.priority}, seq={self.seq}, "
                f"handler={self.handler_name})")


class EventHandle:
    """Handle returned by scheduling; allows cancellation."""

    def __init__(self, event: Event):
        self._event = event

    @property
    def event(self):
        return self._event

    def cancel(self):
        if self._event.executed:
            warnings.warn(f"cancelling already-executed event {self._event!r}; no-op")
            return
        self._event.cancelled = True


class FutureEventList:
    """Heap of events ordered by (time, priority, seq)."""

    def __init__(self):
        self._heap = []

    def __len__(self):
        return len(self._heap)

    def push(self, event: Event):
        if event.seq is None:
            raise ValueError("event must be sequenced by the environment before push")
        heapq.heappush(self._heap, event)

    def peek(self) -> Event:
        return self._heap[0]

    def pop(self) -> Event:
        return heapq.heappop(self._heap)
