"""Sliding-window rate limiter for outbound report downloads.

The public SEC endpoint tolerates at most 10 requests per second from a
single host, so the default limit is 10 per 1.0-second window. Clock and
sleep are injectable so tests can drive the limiter with a fake clock.
"""

from __future__ import annotations

import threading
import time
from collections import deque
from typing import Callable

DEFAULT_RATE_LIMIT = 10


class SlidingWindowRateLimiter:
    def __init__(
        self,
        limit: int = DEFAULT_RATE_LIMIT,
        window: float = 1.0,
        clock: Callable[[], float] = time.monotonic,
        sleeper: Callable[[float], None] = time.sleep,
    ):
        if limit < 1:
            raise ValueError("rate limit must be at least 1")
        self.limit = limit
        self.window = window
        self._clock = clock
        self._sleep = sleeper
        self._events: deque[float] = deque()
        self._lock = threading.Lock()

    def acquire(self) -> float:
        """Block until a request slot is free; returns the event timestamp."""
        while True:
            with self._lock:
                now = self._clock()
                while self._events and self._events[0] <= now - self.window:
                    self._events.popleft()
                if len(self._events) < self.limit:
                    self._events.append(now)
                    return now
                wait = self._events[0] + self.window - now
            self._sleep(max(wait, 0.0))
