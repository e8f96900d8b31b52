from .. import errors


class VolumeDB:
    def __init__(self, store):
        self.store = store

    def volume_create(self, name, size, volume_type="lvm"):
        return self.store.create("volume", name, "CREATING", {
            "size": size,
            "volume_type": volume_type,
            "backend_id": None,
            "provider_location": None,
            "attachment_ids": [],
            "instance_id": None,
        })

    def volume_get(self, volume_id):
        volume = self.store.get("volume", volume_id)
        if volume is None:
            raise errors.VolumeNotFound(f"volume {volume_id} could not be found")
        return volume

    def volume_update(self, volume_id, state=None, **values):
        if self.store.get("volume", volume_id) is None:
            raise errors.VolumeNotFound(f"volume {volume_id} could not be found")
        return self.store.update("volume", volume_id, state=state, **values)

    def volume_attachment_create(self, volume_id, instance_id, mountpoint="/dev/vdb", attach_mode="ro"):
        name = f"{volume_id}:{instance_id}"
        return self.store.create("volume_attachment", name, "CREATED", {
            "volume_id": volume_id,
            "instance_id": instance_id,
            "mountpoint": mountpoint,
            "attach_mode": attach_mode,
        })

    def volume_attachment_get(self, attachment_id):
        attachment = self.store.get("volume_attachment", attachment_id)
        if attachment is None:
            raise errors.NotFound(f"attachment {attachment_id} could not be found")
        return attachment

    def backend_get_by_name(self, name):
        found = self.store.find("volume_backend", name=name)
        if not found:
            raise errors.BackendNotFound(f"volume backend {name} could not be found")
        return found[0]

    def backend_update(self, backend_id, **values):
        if self.store.get("volume_backend", backend_id) is None:
            raise errors.BackendNotFound(f"volume backend {backend_id} could not be found")
        return self.store.update("volume_backend", backend_id, **values)
