"""Compute manager: asynchronous image activation and instance builds.

Known weak spots, kept on purpose:

* ``build_instance`` only handles :class:`~minicloud.errors.MiniCloudError`;
  anything else escapes to the bus dispatcher after the host claim was taken,
  leaving the instance in BUILDING and the claim on the host record.
* the final state update is not read back, so a lost write goes unnoticed.
"""

import hashlib

from .. import errors
from ..network.rpcapi import NetworkRPC
from .resource_tracker import ResourceTracker
from .scheduler import Scheduler


class ComputeManager:
    RPC_METHODS = frozenset({
        "activate_image",
        "build_instance",
        "instance_get_for_attach",
        "instance_get_network_info",
        "get_volume_connector",
        "instance_attach_volume",
        "instance_add_floating_ip",
    })

    def __init__(self, db, bus, log):
        self.db = db
        self.log = log
        self.network_rpcapi = NetworkRPC(bus)
        self.resource_tracker = ResourceTracker(db, log)
        self.scheduler = Scheduler(db, self.resource_tracker, log)

    # -- images ---------------------------------------------------------------
    def activate_image(self, image_id):
        image = self.db.image_get(image_id)
        checksum = hashlib.md5(f"{image.id}:{image.name}".encode()).hexdigest()
        self.log.debug("Image %s upload complete, checksum %s", image_id, checksum)
        self.db.image_update(image_id, state="ACTIVE", checksum=checksum, size_mb=512)
        self.log.info("Image %s is now active", image_id)

    # -- instance build -------------------------------------------------------
    def build_instance(self, instance_id):
        instance = self.db.instance_get(instance_id)
        try:
            host = self.scheduler.select_host_for_instance(instance)
        except errors.NoValidHost as exc:
            self.log.warning("Failed to schedule instance %s: %s", instance_id, exc)
            self.db.instance_update(instance_id, state="ERROR", fault=str(exc), task_state=None)
            return
        self.resource_tracker.instance_claim(host, instance)
        try:
            instance = self.db.instance_update(instance_id, host=host.id, task_state="networking")
            port = self.network_rpcapi.allocate_port_for_instance(instance.id, instance.attributes["network_id"], instance.attributes["security_group_id"])
            self._spawn_instance(instance, host, port)
        except errors.MiniCloudError as exc:
            self.log.error("Build of instance %s aborted: %s", instance_id, exc)
            self.resource_tracker.instance_release(host, instance_id)
            self.db.instance_update(instance_id, state="ERROR", fault=str(exc), task_state=None)
            return
        self.resource_tracker.build_finished(host)
        self.log.info("Instance %s spawned successfully on %s", instance_id, host.id)

    def _spawn_instance(self, instance, host, port):
        self.log.debug("Spawning instance %s on %s with port %s", instance.id, host.id, port["id"])
        self.db.instance_update(instance.id, port_ids=[port["id"]], fixed_ip=port["fixed_ip"], power_state="RUNNING", task_state="spawning")
        self.network_rpcapi.bind_port_to_host(port["id"], host.id)
        self.db.instance_update(instance.id, state="ACTIVE", task_state=None)

    # -- calls from other services --------------------------------------------
    def instance_get_for_attach(self, instance_id):
        instance = self.db.instance_get(instance_id)
        return instance.view()

    def instance_get_network_info(self, instance_id):
        instance = self.db.instance_get(instance_id)
        return {
            "id": instance.id,
            "state": instance.state,
            "port_ids": list(instance.attributes["port_ids"]),
            "fixed_ip": instance.attributes["fixed_ip"],
            "floating_ips": list(instance.attributes["floating_ips"]),
            "security_group_id": instance.attributes["security_group_id"],
        }

    def get_volume_connector(self, instance_id):
        instance = self.db.instance_get(instance_id)
        host_id = instance.attributes["host"]
        if host_id is None:
            raise errors.InvalidState(f"instance {instance_id} is not placed on a host")
        host = self.db.host_get(host_id)
        return {"host": host.id, "initiator": f"iqn.2019-01.org.minicloud:{host.name}:{instance.id}"}

    def instance_attach_volume(self, instance_id, volume_id, device):
        instance = self.db.instance_get(instance_id)
        attached = instance.attributes["attached_volume_ids"] + [volume_id]
        self.db.instance_update(instance_id, attached_volume_ids=attached)
        self.log.info("Attached volume %s to instance %s at %s", volume_id, instance_id, device)

    def instance_add_floating_ip(self, instance_id, address):
        instance = self.db.instance_get(instance_id)
        addresses = instance.attributes["floating_ips"] + [address]
        self.db.instance_update(instance_id, floating_ips=addresses)
        self.log.debug("Instance %s now reachable at %s", instance_id, address)
