"""Volume manager: backend allocation and iSCSI exports."""

from .. import errors

DEFAULT_BACKEND = "lvm-1"


class VolumeManager:
    RPC_METHODS = frozenset({"create_volume_on_backend", "initialize_connection"})

    def __init__(self, db, bus, log):
        self.db = db
        self.log = log

    def create_volume_on_backend(self, volume_id):
        volume = self.db.volume_get(volume_id)
        try:
            backend = self.db.backend_get_by_name(DEFAULT_BACKEND)
            location = self._allocate_backend_space(backend, volume)
        except (errors.BackendFull, errors.BackendNotFound) as exc:
            self.log.error("Volume %s creation failed: %s", volume_id, exc)
            self.db.volume_update(volume_id, state="ERROR")
            return
        self.db.volume_update(volume_id, state="AVAILABLE", backend_id=backend.id, provider_location=location)
        self.log.info("Volume %s created on %s", volume_id, backend.name)

    def _allocate_backend_space(self, backend, volume):
        size = volume.attributes["size"]
        free = backend.attributes["capacity_gb"] - backend.attributes["allocated_gb"]
        if size > free:
            raise errors.BackendFull(f"backend {backend.name} has {free} GB free, {size} GB requested")
        allocated = backend.attributes["allocated_gb"] + size
        self.db.backend_update(backend.id, allocated_gb=allocated)
        self.log.debug("Backend %s now has %d GB allocated", backend.name, allocated)
        return f"{backend.name}/volumes/{volume.id}"

    def initialize_connection(self, volume_id, connector):
        volume = self.db.volume_get(volume_id)
        if volume.attributes["provider_location"] is None:
            raise errors.InvalidState(f"volume {volume_id} has no provider location")
        portal = self._export_volume(volume, connector["initiator"], port=3260)
        return {"target_portal": portal, "target_lun": 1, "initiator": connector["initiator"]}

    def _export_volume(self, volume, initiator, port=3261):
        portal = f"{volume.attributes['provider_location']}@127.0.0.1:{port}"
        self.log.debug("Exported %s to %s via %s", volume.id, initiator, portal)
        return portal
