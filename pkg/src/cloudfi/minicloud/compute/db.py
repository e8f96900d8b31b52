"""Compute-side datastore API."""

from .. import errors


class ComputeDB:
    def __init__(self, store):
        self.store = store

    # images
    def image_create(self, name, disk_format="qcow2", min_disk=0):
        return self.store.create("image", name, "QUEUED", {"disk_format": disk_format, "min_disk": min_disk, "checksum": None, "size_mb": 0})

    def image_get(self, image_id):
        image = self.store.get("image", image_id)
        if image is None:
            raise errors.ImageNotFound(f"image {image_id} could not be found")
        return image

    def image_get_by_name(self, name):
        found = self.store.find("image", name=name)
        return found[0] if found else None

    def image_update(self, image_id, state=None, **values):
        if self.store.get("image", image_id) is None:
            raise errors.ImageNotFound(f"image {image_id} could not be found")
        return self.store.update("image", image_id, state=state, **values)

    # keypairs
    def keypair_create(self, name, public_key, fingerprint):
        return self.store.create("keypair", name, "CREATED", {"public_key": public_key, "fingerprint": fingerprint})

    def keypair_get(self, keypair_id):
        keypair = self.store.get("keypair", keypair_id)
        if keypair is None:
            raise errors.KeypairNotFound(f"keypair {keypair_id} could not be found")
        return keypair

    def keypair_get_by_name(self, name):
        found = self.store.find("keypair", name=name)
        return found[0] if found else None

    # flavors
    def flavor_get_by_name(self, name):
        found = self.store.find("flavor", name=name)
        if not found:
            raise errors.FlavorNotFound(f"flavor {name} could not be found")
        return found[0]

    # instances
    def instance_create(self, name, **values):
        values.setdefault("host", None)
        values.setdefault("port_ids", [])
        values.setdefault("fixed_ip", None)
        values.setdefault("floating_ips", [])
        values.setdefault("attached_volume_ids", [])
        values.setdefault("power_state", "NOSTATE")
        values.setdefault("task_state", "scheduling")
        values.setdefault("fault", None)
        return self.store.create("instance", name, "BUILDING", values)

    def instance_get(self, instance_id):
        instance = self.store.get("instance", instance_id)
        if instance is None:
            raise errors.InstanceNotFound(f"instance {instance_id} could not be found")
        return instance

    def instance_update(self, instance_id, state=None, **values):
        if self.store.get("instance", instance_id) is None:
            raise errors.InstanceNotFound(f"instance {instance_id} could not be found")
        return self.store.update("instance", instance_id, state=state, **values)

    # hosts
    def host_get(self, host_id):
        host = self.store.get("host", host_id)
        if host is None:
            raise errors.HostNotFound(f"compute host {host_id} could not be found")
        return host

    def host_get_all(self):
        return self.store.find("host")

    def host_update(self, host_id, state=None, **values):
        if self.store.get("host", host_id) is None:
            raise errors.HostNotFound(f"compute host {host_id} could not be found")
        return self.store.update("host", host_id, state=state, **values)
