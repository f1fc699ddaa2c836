"""Discrete-event engine: ordering, determinism, lifecycle, randomness."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qnetsim.des import (Entity, EnvState, Event, FutureEventList, SimEnv,
                         clear_default_env, get_default_env, set_default_env)


class Recorder(Entity):
    def __init__(self, name, env=None):
        super().__init__(name, env)
        self.seen = []

    def note(self, tag):
        self.seen.append((self.env.now, tag))


@pytest.fixture(autouse=True)
def _no_default_env():
    clear_default_env()
    yield
    clear_default_env()


def test_events_execute_in_time_order():
    env = SimEnv("t")
    rec = Recorder("r", env)
    env.init()
    env.schedule_at(30, rec, "note", "c")
    env.schedule_at(10, rec, "note", "a")
    env.schedule_at(20, rec, "note", "b")
    env.run()
    assert rec.seen == [(10, "a"), (20, "b"), (30, "c")]


def test_same_time_orders_by_priority_then_fifo():
    env = SimEnv("t")
    rec = Recorder("r", env)
    env.init()
    env.schedule_at(5, rec, "note", "low", priority=1)
    env.schedule_at(5, rec, "note", "hi", priority=0)
    env.schedule_at(5, rec, "note", "low2", priority=1)
    env.run()
    assert [tag for _, tag in rec.seen] == ["hi", "low", "low2"]


@given(st.lists(st.tuples(st.integers(0, 1000), st.integers(0, 5)),
                min_size=1, max_size=60))
def test_fel_pops_in_sort_key_order(items):
    fel = FutureEventList()
    for seq, (time, priority) in enumerate(items):
        ev = Event(time, None, "x", (), {}, priority)
        ev.seq = seq
        fel.push(ev)
    popped = [fel.pop().sort_key for _ in range(len(items))]
    assert popped == sorted(popped)


def test_schedule_before_init_rejected():
    env = SimEnv("t")
    rec = Recorder("r", env)
    with pytest.raises(RuntimeError):
        env.schedule_at(1, rec, "note", "x")


def test_schedule_into_past_rejected():
    env = SimEnv("t")
    rec = Recorder("r", env)
    env.init()
    env.schedule_at(10, rec, "note", "x")
    env.run()
    assert env.now == 10
    env2 = SimEnv("t2")
    rec2 = Recorder("r", env2)
    env2.init()
    env2.schedule_at(50, rec2, "advance_then_rewind")

    def advance_then_rewind():
        with pytest.raises(ValueError):
            env2.schedule_at(10, rec2, "note", "never")
    rec2.advance_then_rewind = advance_then_rewind
    env2.run()


def test_cancelled_event_is_skipped():
    env = SimEnv("t")
    rec = Recorder("r", env)
    env.init()
    handle = env.schedule_at(10, rec, "note", "dropped")
    env.schedule_at(20, rec, "note", "kept")
    handle.cancel()
    env.run()
    assert rec.seen == [(20, "kept")]


def test_run_stops_at_end_time_without_consuming_later_events():
    env = SimEnv("t")
    rec = Recorder("r", env)
    env.init()
    env.schedule_at(10, rec, "note", "a")
    env.schedule_at(99, rec, "note", "beyond")
    report = env.run(end_time=50)
    assert rec.seen == [(10, "a")]
    assert report.final_time == 10
    assert env.state is EnvState.FINISHED


def test_entity_attaches_to_default_env():
    env = SimEnv("dflt", default=True)
    rec = Recorder("r")
    assert rec.env is env
    assert get_default_env() is env


def test_default_env_required_when_unset():
    with pytest.raises(RuntimeError):
        Recorder("orphan")


def test_entity_init_cascades_to_components():
    env = SimEnv("t")
    parent = Recorder("p", env)
    child = Recorder("c", env)
    parent.install(child)
    inited = []
    child._init = lambda: inited.append("child")
    parent._init = lambda: inited.append("parent")
    env.init()
    assert inited == ["parent", "child"]


def test_rng_streams_are_stable_and_independent_of_creation_order():
    env_a = SimEnv("a", seed=11)
    env_b = SimEnv("b", seed=11)
    draw_a = env_a.rng_for("alice").random(4)
    # creating other streams first must not perturb "alice"
    env_b.rng_for("zed")
    draw_b = env_b.rng_for("alice").random(4)
    assert np.array_equal(draw_a, draw_b)
    assert not np.array_equal(draw_a, env_a.rng_for("bob").random(4))


def test_different_seeds_give_different_streams():
    a = SimEnv("a", seed=1).rng_for("x").random(8)
    b = SimEnv("b", seed=2).rng_for("x").random(8)
    assert not np.array_equal(a, b)


class PingPong(Entity):
    def __init__(self, name, env=None):
        super().__init__(name, env)
        self.count = 0

    def _init(self):
        self.scheduler.schedule_after(1, self, "ping")

    def ping(self):
        self.count += 1
        if self.count < 5:
            jitter = int(self.rng.integers(1, 10))
            self.scheduler.schedule_after(jitter, self, "ping")


def _run_trace(seed):
    env = SimEnv("d", seed=seed)
    PingPong("p", env)
    PingPong("q", env)
    env.init()
    env.run()
    return list(env.trace)


def test_identical_seeds_identical_traces():
    assert _run_trace(7) == _run_trace(7)


def test_trace_records_handler_names():
    trace = _run_trace(7)
    assert all(name in ("p.ping", "q.ping") for *_ignored, name in trace)


def test_log_lines_format_and_level_filter():
    env = SimEnv("t", seed=0)
    env.set_log(level="INFO")
    rec = Recorder("r", env)
    env.init()
    env.schedule_at(42, rec, "note", "x")
    env.run()
    env.log("DEBUG", rec, "hidden")
    env.log("WARN", rec, "shown")
    assert env._log_lines == ["42\tWARN\tr\tshown"]
