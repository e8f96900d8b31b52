"""A minicloud deployment: datastore, message bus, logs and the three services.

:meth:`Cloud.request` is the single API entry point.  It converts every error
escaping a handler into :class:`~minicloud.errors.ApiError`: expected client
errors (4xx) are logged at WARNING, anything else at ERROR.
"""

import inspect

from . import errors
from .bus import MessageBus
from .clock import SimClock
from .compute.api import ComputeAPI
from .compute.db import ComputeDB
from .compute.manager import ComputeManager
from .datastore import Datastore
from .logs import LogSink, ServiceLogger
from .network.api import NetworkAPI
from .network.db import NetworkDB
from .network.manager import NetworkManager
from .volume.api import VolumeAPI
from .volume.db import VolumeDB
from .volume.manager import VolumeManager

CATALOG_VERSION = "1.0"
REQUEST_COST = 0.05

ENDPOINTS = {
    "compute.register_image": "compute",
    "compute.get_image": "compute",
    "compute.create_keypair": "compute",
    "compute.get_keypair": "compute",
    "compute.boot_instance": "compute",
    "compute.get_instance": "compute",
    "volume.create_volume": "volume",
    "volume.get_volume": "volume",
    "volume.attach_volume": "volume",
    "volume.get_volume_attachment": "volume",
    "network.create_network": "network",
    "network.get_network": "network",
    "network.create_subnet": "network",
    "network.get_subnet": "network",
    "network.create_router": "network",
    "network.get_router": "network",
    "network.add_router_interface": "network",
    "network.get_router_interface": "network",
    "network.create_security_group": "network",
    "network.create_security_group_rule": "network",
    "network.get_security_group": "network",
    "network.create_floating_ip": "network",
    "network.get_floating_ip": "network",
    "network.associate_floating_ip": "network",
    "network.probe_connectivity": "network",
}

ADMIN_ENDPOINTS = (
    "admin.health",
    "admin.catalog",
    "admin.now",
    "admin.wait",
    "admin.snapshot",
    "admin.reset",
    "admin.digest",
    "admin.kv_put",
    "admin.kv_get",
)


def seed(store):
    """Populate an empty datastore with the fixed infrastructure records."""
    with store.transaction():
        store.create("host", "cmp-01", "UP", {"vcpus": 4, "memory_mb": 8192, "max_concurrent_builds": 1, "builds_in_progress": 0, "instance_ids": []})
        store.create("flavor", "m1.small", "CREATED", {"vcpus": 1, "memory_mb": 512, "disk_gb": 1})
        store.create("flavor", "m1.medium", "CREATED", {"vcpus": 2, "memory_mb": 2048, "disk_gb": 10})
        public = store.create("network", "public", "BUILD", {"mtu": 1500, "external": True, "subnet_ids": []})
        store.create("ip_pool", "public-pool", "CREATED", {"network_id": public.id, "range_start": "172.24.4.10", "range_end": "172.24.4.60", "allocated": []})
        store.create("volume_backend", "lvm-1", "UP", {"capacity_gb": 100, "allocated_gb": 0})
        store.create("l3_agent", "l3-agent-1", "UP", {"router_ids": []})
    store.update("network", public.id, state="ACTIVE")


class Cloud:
    def __init__(self, state_dir=None, log_dir=None, clock=None, request_cost=REQUEST_COST):
        self.clock = clock or SimClock()
        self.request_cost = request_cost
        self.sink = LogSink(log_dir)
        self.store = Datastore(state_dir)
        if not self.store.find("host"):
            seed(self.store)
        self._start_services()

    def _logger(self, component):
        return ServiceLogger(component, self.sink, self.clock)

    def _start_services(self):
        self.bus = MessageBus(self.clock, self._logger("messaging"))
        compute_db, volume_db, network_db = ComputeDB(self.store), VolumeDB(self.store), NetworkDB(self.store)
        self.services = {
            "compute": ComputeAPI(compute_db, self.bus, self._logger("compute-api")),
            "volume": VolumeAPI(volume_db, self.bus, self._logger("volume-api")),
            "network": NetworkAPI(network_db, self.bus, self._logger("network-api")),
        }
        self.bus.register("compute", ComputeManager(compute_db, self.bus, self._logger("compute-manager")))
        self.bus.register("volume", VolumeManager(volume_db, self.bus, self._logger("volume-manager")))
        self.bus.register("network", NetworkManager(network_db, self.bus, self._logger("network-manager")))
        self._api_logs = {name: svc.log for name, svc in self.services.items()}

    def restart_services(self):
        """Drop all in-memory service state; the datastore is kept."""
        self.bus.clear()
        self._start_services()

    def close(self):
        self.store.close()
        self.sink.close()

    # -- service API ------------------------------------------------------------
    def now(self):
        return self.clock.now()

    def wait(self, seconds):
        self.bus.run_until(round(self.clock.now() + float(seconds), 6))
        return self.clock.now()

    def request(self, endpoint, params=None, context=None):
        params = dict(params or {})
        subsystem = ENDPOINTS.get(endpoint)
        if subsystem is None:
            raise errors.ApiError("not-found", 404, f"unknown endpoint {endpoint!r}", endpoint.split(".")[0], endpoint)
        self.bus.run_until(round(self.clock.now() + self.request_cost, 6))
        self.store.owner_round = (context or {}).get("round")
        handler = getattr(self.services[subsystem], endpoint.split(".", 1)[1])
        log = self._api_logs[subsystem]
        log.debug("REQ %s %s", endpoint, sorted(params.items()))
        try:
            inspect.signature(handler).bind(**params)
        except TypeError as exc:
            log.warning("Rejected malformed request to %s: %s", endpoint, exc)
            raise errors.ApiError("bad-request", 400, str(exc), subsystem, endpoint)
        try:
            result = handler(**params)
        except errors.MiniCloudError as exc:
            if exc.status >= 500:
                log.error("%s failed: %s: %s", endpoint, type(exc).__name__, exc)
            else:
                log.warning("%s returned %d: %s", endpoint, exc.status, exc)
            raise errors.ApiError(exc.code, exc.status, str(exc), subsystem, endpoint) from exc
        except Exception as exc:
            log.error("Unexpected error in %s: %s: %s", endpoint, type(exc).__name__, exc)
            raise errors.ApiError("server-error", 500, f"{type(exc).__name__}: {exc}", subsystem, endpoint) from exc
        finally:
            self.store.owner_round = None
        log.info("%s -> 200", endpoint)
        return result

    # -- admin ----------------------------------------------------------------
    def snapshot(self):
        return self.store.snapshot()

    def reset(self, blob):
        """Restore the datastore from ``blob`` and restart every service.

        The snapshot is validated before anything is touched, so a corrupted
        snapshot leaves the deployment as it was.
        """
        self.store.restore(blob)
        self.restart_services()

    def digest(self):
        return self.store.digest()

    def kv_put(self, key, value):
        existing = self.store.find("sentinel", name=key)
        if existing:
            self.store.update("sentinel", existing[0].id, value=value)
        else:
            self.store.create("sentinel", key, "CREATED", {"value": value})

    def kv_get(self, key):
        existing = self.store.find("sentinel", name=key)
        return existing[0].attributes["value"] if existing else None

    def handle_admin(self, endpoint, params):
        params = params or {}
        if endpoint == "admin.health":
            return {"status": "ok", "catalog_version": CATALOG_VERSION}
        if endpoint == "admin.catalog":
            return {"catalog_version": CATALOG_VERSION, "endpoints": dict(ENDPOINTS)}
        if endpoint == "admin.now":
            return self.now()
        if endpoint == "admin.wait":
            return self.wait(params["seconds"])
        if endpoint == "admin.snapshot":
            return self.snapshot().decode()
        if endpoint == "admin.reset":
            self.reset(params["snapshot"].encode())
            return None
        if endpoint == "admin.digest":
            return self.digest()
        if endpoint == "admin.kv_put":
            self.kv_put(params["key"], params["value"])
            return None
        if endpoint == "admin.kv_get":
            return self.kv_get(params["key"])
        raise errors.ApiError("not-found", 404, f"unknown endpoint {endpoint!r}", "admin", endpoint)

    def dispatch(self, endpoint, params=None, context=None):
        if endpoint.startswith("admin."):
            return self.handle_admin(endpoint, params)
        return self.request(endpoint, params, context)
