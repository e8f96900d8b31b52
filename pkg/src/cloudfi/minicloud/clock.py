import time


class SimClock:
    """Deterministic clock advanced explicitly by the deployment.

    Timestamps are kept at microsecond resolution so that values survive a
    round trip through the ISO log format unchanged.
    """

    simulated = True

    def __init__(self, start=0.0):
        self._now = round(float(start), 6)

    def now(self):
        return self._now

    def advance(self, seconds):
        if seconds < 0:
            raise ValueError("clock cannot go backwards")
        self._now = round(self._now + seconds, 6)

    def advance_to(self, t):
        if t > self._now:
            self._now = round(t, 6)


class WallClock:
    simulated = False

    def __init__(self):
        self._origin = time.monotonic()

    def now(self):
        return round(time.monotonic() - self._origin, 6)

    def advance(self, seconds):
        if seconds > 0:
            time.sleep(seconds)

    def advance_to(self, t):
        delay = t - self.now()
        if delay > 0:
            time.sleep(delay)
