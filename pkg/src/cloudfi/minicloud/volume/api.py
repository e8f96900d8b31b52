"""Volume service API handlers."""

from .. import errors
from ..compute.rpcapi import ComputeRPC
from .rpcapi import VolumeRPC

RECOMMENDED_MIN_SIZE_GB = 2


class VolumeAPI:
    def __init__(self, db, bus, log):
        self.db = db
        self.log = log
        self.volume_rpcapi = VolumeRPC(bus)
        self.compute_rpcapi = ComputeRPC(bus)

    def create_volume(self, name, size, volume_type="lvm"):
        if not isinstance(size, int) or size <= 0:
            raise errors.BadRequest(f"invalid volume size {size!r}")
        if size < RECOMMENDED_MIN_SIZE_GB:
            self.log.warning("Volume %s requested with %d GB, below the recommended minimum of %d GB", name, size, RECOMMENDED_MIN_SIZE_GB)
        volume = self.db.volume_create(name, size, volume_type=volume_type)
        self.log.info("Volume %s (%s) scheduled for creation", volume.id, name)
        self.volume_rpcapi.create_volume_on_backend(volume.id)
        return volume.id

    def get_volume(self, volume_id):
        volume = self.db.volume_get(volume_id)
        return volume.view()

    def get_volume_attachment(self, attachment_id):
        attachment = self.db.volume_attachment_get(attachment_id)
        return attachment.view()

    def attach_volume(self, volume_id, instance_id, mountpoint="/dev/vdb"):
        try:
            volume = self.db.volume_get(volume_id)
        except errors.VolumeNotFound:
            raise errors.BadRequest(f"volume {volume_id} not found")
        if volume.state != "AVAILABLE":
            raise errors.InvalidState(f"volume {volume_id} is {volume.state}, expected AVAILABLE")
        try:
            instance = self.compute_rpcapi.instance_get_for_attach(instance_id)
        except errors.InstanceNotFound:
            raise errors.BadRequest(f"instance {instance_id} not found")
        if instance["state"] != "ACTIVE":
            raise errors.InvalidState(f"instance {instance_id} is {instance['state']}, cannot attach volume")
        connector = self.compute_rpcapi.get_volume_connector(instance_id)
        connection = self.volume_rpcapi.initialize_connection(volume_id, connector)
        attachment = self.db.volume_attachment_create(volume_id, instance_id, mountpoint=mountpoint, attach_mode="rw")
        self.db.volume_update(volume_id, state="IN_USE", attachment_ids=[attachment.id], instance_id=instance_id, target_portal=connection["target_portal"])
        self.compute_rpcapi.instance_attach_volume(instance_id, volume_id, mountpoint)
        self.log.info("Volume %s attached to %s as %s", volume_id, instance_id, attachment.id)
        return attachment.id
