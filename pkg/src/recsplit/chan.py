"""Single-slot blocking rendezvous channels.

Each channel holds at most one value and is shared by exactly two agents.
Every wait re-checks its guard in a loop, so spurious wakeups are harmless.
Blocking here is indefinite; deadline handling belongs to the harness.

An optional shared EventLog receives one record per *completed* operation
(the record is appended inside the critical section, so the log order is
the true completion order).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass


@dataclass(frozen=True)
class ChannelEvent:
    seq: int
    channel: str
    op: str
    value: int


class EventLog:
    """Thread-safe, append-only log shared by any number of channels."""

    def __init__(self):
        self._lock = threading.Lock()
        self._events = []

    def record(self, channel: str, op: str, value: int):
        with self._lock:
            self._events.append(ChannelEvent(len(self._events), channel, op, value))

    def events(self) -> list:
        with self._lock:
            return list(self._events)


class ProbeChannel:
    """Carries produced values to the consumer, one at a time.

    put blocks while the previous value is still unconsumed; get blocks until
    a value is available. In any completed run the puts and gets strictly
    alternate, starting with a put, and every value is delivered exactly once
    in order.
    """

    def __init__(self, trace: EventLog | None = None):
        self._cond = threading.Condition()
        self._slot = 0
        self._available = False
        self._trace = trace

    def put(self, value: int):
        with self._cond:
            while self._available:      # consumer has not consumed
                self._cond.wait()
            self._slot = value
            self._available = True
            if self._trace:
                self._trace.record("probe", "put", value)
            self._cond.notify()

    def get(self) -> int:
        with self._cond:
            while not self._available:  # producer has not produced
                self._cond.wait()
            value = self._slot
            self._available = False
            if self._trace:
                self._trace.record("probe", "get", value)
            self._cond.notify()
            return value


class InjectChannel:
    """Carries the input to the producer and the producer's leftover back out.

    put stores a value once the slot is open and closes it. swap_in waits for
    a stored value and trades it for the caller's, leaving the slot closed.
    swap_out trades unconditionally and reopens the slot. get reads a stored
    value without consuming it; nothing in the toolkit calls it, it exists to
    complete the channel's surface.
    """

    def __init__(self, trace: EventLog | None = None):
        self._cond = threading.Condition()
        self._slot = 0
        self._not_set = True
        self._trace = trace

    def put(self, value: int):
        with self._cond:
            while not self._not_set:
                self._cond.wait()
            self._slot = value
            self._not_set = False
            if self._trace:
                self._trace.record("inject", "put", value)
            self._cond.notify()

    def swap_in(self, value: int) -> int:
        with self._cond:
            while self._not_set:
                self._cond.wait()
            out = self._slot
            self._slot = value
            if self._trace:
                self._trace.record("inject", "swap_in", out)
            self._cond.notify()
            return out

    def swap_out(self, value: int) -> int:
        with self._cond:
            out = self._slot
            self._slot = value
            self._not_set = not self._not_set
            if self._trace:
                self._trace.record("inject", "swap_out", value)
            self._cond.notify()
            return out

    def get(self) -> int:
        with self._cond:
            while self._not_set:
                self._cond.wait()
            value = self._slot
            if self._trace:
                self._trace.record("inject", "get", value)
            self._cond.notify()
            return value

    @property
    def slot(self) -> int:
        """Current slot content; for post-run inspection, not coordination."""
        with self._cond:
            return self._slot
