"""The discrete-event simulation environment.

A `SimEnv` owns the virtual timeline (integer picoseconds), the future
event list and the master random seed.  Entities attach to an
environment at creation; if none is passed explicitly they attach to the
process-wide default environment.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .event import Event, EventHandle, FutureEventList

INFINITE = None  # sentinel: run until the future event list drains

_LOG_LEVELS = {"DEBUG": 0, "INFO": 1, "WARN": 2}

_default_env = None


def set_default_env(env):
    global _default_env
    _default_env = env


def get_default_env():
    if _default_env is None:
        raise RuntimeError("no default simulation environment has been set")
    return _default_env


def clear_default_env():
    global _default_env
    _default_env = None


class EnvState(Enum):
    CREATED = "created"
    INITIALIZED = "initialized"
    RUNNING = "running"
    FINISHED = "finished"


@dataclass
class SimReport:
    events_executed: int
    final_time: int


class SimEnv:
    """Simulation environment with a built-in timeline."""

    def __init__(self, name, default=False, seed=0):
        self.name = name
        self.now = 0
        self.fel = FutureEventList()
        self.state = EnvState.CREATED
        self.seed = seed
        self.entities = []
        self.trace = []  # (time, priority, seq, handler_name) per executed event
        self._seq = itertools.count()
        self._log_path = None
        self._log_level = "INFO"
        self._log_lines = []
        if default:
            set_default_env(self)

    def set_default(self):
        set_default_env(self)

    # ---- random streams -------------------------------------------------
    def rng_for(self, stream_name: str) -> np.random.Generator:
        """Derive a per-entity random stream from (seed, stream name).

        Streams are independent of entity creation order, so adding an
        entity does not perturb the randomness seen by the others.
        """
        digest = hashlib.sha256(stream_name.encode()).digest()
        salt = int.from_bytes(digest[:8], "big")
        return np.random.default_rng(np.random.SeedSequence([self.seed, salt]))

    # ---- logging --------------------------------------------------------
    def set_log(self, path=None, level="INFO"):
        if level not in _LOG_LEVELS:
            raise ValueError(f"unknown log level {level!r}")
        self._log_path = path
        self._log_level = level

    def log(self, level, entity, message):
        if _LOG_LEVELS[level] < _LOG_LEVELS[self._log_level]:
            return
        name = getattr(entity, "name", str(entity))
        self._log_lines.append(f"{self.now}\t{level}\t{name}\t{message}")

    # ---- scheduling -----------------------------------------------------
    def schedule(self, event: Event) -> EventHandle:
        if self.state is EnvState.CREATED:
            raise RuntimeError("cannot schedule events before the environment is initialized")
        if self.state is EnvState.FINISHED:
            raise RuntimeError("cannot schedule events on a finished environment")
        if event.time < self.now:
            raise ValueError(
                f"cannot schedule into the past: event time {event.time} < now {self.now}")
        event.seq = next(self._seq)
        self.fel.push(event)
        return EventHandle(event)

    def schedule_at(self, time, owner, action, *args, priority=0, **kwargs):
        return self.schedule(Event(time, owner, action, args, kwargs, priority))

    def schedule_after(self, delay, owner, action, *args, priority=0, **kwargs):
        return self.schedule_at(self.now + delay, owner, action, *args,
                                priority=priority, **kwargs)

    # ---- lifecycle ------------------------------------------------------
    def attach(self, entity):
        self.entities.append(entity)

    def init(self):
        if self.state is not EnvState.CREATED:
            raise RuntimeError(f"init is only legal from created state, not {self.state}")
        self.state = EnvState.INITIALIZED
        # snapshot: entity init may create further (already-initialized) helpers
        for entity in list(self.entities):
            entity.init()

    def run(self, end_time=INFINITE, logging=False) -> SimReport:
        if self.state is not EnvState.INITIALIZED:
            raise RuntimeError(f"run is only legal from initialized state, not {self.state}")
        self.state = EnvState.RUNNING
        executed = 0
        while len(self.fel):
            nxt = self.fel.peek()
            if end_time is not INFINITE and nxt.time > end_time:
                break
            event = self.fel.pop()
            if event.cancelled:
                continue
            self.now = event.time
            self.trace.append((event.time, event.priority, event.seq, event.handler_name))
            event.execute()
            executed += 1
        self.state = EnvState.FINISHED
        if logging and self._log_path is not None:
            with open(self._log_path, "w") as f:
                for line in self._log_lines:
                    f.write(line + "\n")
        return SimReport(events_executed=executed, final_time=self.now)
