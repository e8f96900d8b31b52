"""Ways for the workload to reach a minicloud deployment."""

from dataclasses import dataclass, field

from cloudfi.mutation import runtime


@dataclass
class Reply:
    ok: bool
    result: object = None
    error: dict = None
    now: float = 0.0
    triggers: list = field(default_factory=list)


class RpcTarget:
    """A deployment in a host subprocess (anything with ``request``)."""

    def __init__(self, host):
        self.host = host

    def call(self, endpoint, params=None, context=None):
        r = self.host.request(endpoint, params, context)
        return Reply(r["ok"], r.get("result"), r.get("error"), r["now"], [tuple(t) for t in r.get("triggers", [])])

    def wait(self, seconds):
        return self.call("admin.wait", {"seconds": seconds})


class LocalTarget:
    """An in-process :class:`~cloudfi.minicloud.Cloud`."""

    def __init__(self, cloud):
        self.cloud = cloud

    def call(self, endpoint, params=None, context=None):
        try:
            result = self.cloud.dispatch(endpoint, params or {}, context or {})
            reply = Reply(True, result)
        except Exception as exc:
            if not hasattr(exc, "to_dict"):
                raise
            reply = Reply(False, error=exc.to_dict())
        reply.now = self.cloud.now()
        reply.triggers = runtime.drain_triggers()
        return reply

    def wait(self, seconds):
        return self.call("admin.wait", {"seconds": seconds})
