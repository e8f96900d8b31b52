"""Internal message bus between services.

``call`` delivers synchronously and propagates the handler's exception.
``cast`` schedules a one-way message that is delivered when the clock passes
its due time; exceptions raised by cast handlers are logged by the dispatcher
and otherwise swallowed, as an asynchronous worker would.
"""

import heapq
import itertools

from . import errors


class MessageBus:
    def __init__(self, clock, log):
        self._clock = clock
        self._log = log
        self._endpoints = {}
        self._queue = []
        self._seq = itertools.count()

    def register(self, topic, endpoint):
        self._endpoints[topic] = endpoint

    def _lookup(self, topic, method):
        endpoint = self._endpoints.get(topic)
        if endpoint is None or method not in getattr(endpoint, "RPC_METHODS", ()):
            raise errors.MessagingError(f"no endpoint for {topic}.{method}")
        return getattr(endpoint, method)

    def call(self, topic, method, **kwargs):
        handler = self._lookup(topic, method)
        self._log.trace("call %s.%s", topic, method)
        return handler(**kwargs)

    def cast(self, topic, method, delay=0.0, **kwargs):
        self._lookup(topic, method)
        due = round(self._clock.now() + delay, 6)
        heapq.heappush(self._queue, (due, next(self._seq), topic, method, kwargs))
        self._log.trace("cast %s.%s due at %.6f", topic, method, due)

    def pending(self):
        return len(self._queue)

    def run_until(self, t):
        while self._queue and self._queue[0][0] <= t:
            due, _, topic, method, kwargs = heapq.heappop(self._queue)
            self._clock.advance_to(due)
            try:
                self._lookup(topic, method)(**kwargs)
            except Exception as exc:
                self._log.error("Exception during message handling %s.%s: %s: %s", topic, method, type(exc).__name__, exc)
        self._clock.advance_to(t)

    def clear(self):
        self._queue.clear()
