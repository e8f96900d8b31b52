"""Compute service API handlers.

Validation here is reactive: a request is checked against the state of the
resources it names, but nothing re-verifies the outcome of the asynchronous
work it schedules (see ``build_instance`` in :mod:`manager`).
"""

import hashlib

from .. import errors
from ..network.rpcapi import NetworkRPC
from .rpcapi import ComputeRPC

DISK_FORMATS = ("qcow2", "raw", "vmdk")


def _generate_public_key(name):
    material = hashlib.sha256(f"minicloud-key:{name}".encode()).hexdigest()
    return f"ssh-ed25519 AAAA{material} generated@{name}"


def _fingerprint(public_key):
    digest = hashlib.md5(public_key.encode()).hexdigest()
    return ":".join(digest[i:i + 2] for i in range(0, len(digest), 2))


class ComputeAPI:
    def __init__(self, db, bus, log):
        self.db = db
        self.log = log
        self.compute_rpcapi = ComputeRPC(bus)
        self.network_rpcapi = NetworkRPC(bus)
        self._flavor_cache = {}

    # -- images ---------------------------------------------------------------
    def register_image(self, name, disk_format="qcow2", min_disk=0):
        if not name:
            raise errors.BadRequest("image name is required")
        if disk_format not in DISK_FORMATS:
            raise errors.BadRequest(f"unsupported disk format {disk_format!r}")
        if self.db.image_get_by_name(name) is not None:
            raise errors.Conflict(f"image {name!r} already exists")
        image = self.db.image_create(name, disk_format=disk_format, min_disk=min_disk)
        self.log.info("Registered image %s (%s), queued for upload", image.id, name)
        self.compute_rpcapi.activate_image(image.id)
        return image.id

    def get_image(self, image_id):
        image = self.db.image_get(image_id)
        return image.view()

    # -- keypairs -------------------------------------------------------------
    def create_keypair(self, name, public_key=None):
        if not name:
            raise errors.BadRequest("keypair name is required")
        if self.db.keypair_get_by_name(name) is not None:
            raise errors.Conflict(f"keypair {name!r} already exists")
        if public_key is None:
            self.log.warning("No public key supplied for keypair %s; generating one server-side", name)
            public_key = _generate_public_key(name)
        keypair = self.db.keypair_create(name, public_key, _fingerprint(public_key))
        self.log.info("Created keypair %s", keypair.id)
        return keypair.id

    def get_keypair(self, keypair_id):
        keypair = self.db.keypair_get(keypair_id)
        return keypair.view()

    # -- instances ------------------------------------------------------------
    def _flavor(self, name):
        flavor = self._flavor_cache.get(name)
        if flavor is None:
            flavor = self.db.flavor_get_by_name(name)
            self._flavor_cache[name] = flavor
        return flavor

    def boot_instance(self, name, image_id, keypair_id, security_group_id, network_id, flavor="m1.small"):
        if not name:
            raise errors.BadRequest("instance name is required")
        try:
            image = self.db.image_get(image_id)
        except errors.ImageNotFound:
            raise errors.BadRequest(f"image {image_id} not found")
        # Only a failed upload is refused; a queued image is assumed to finish
        # uploading before the hypervisor needs it.
        if image.state == "ERROR":
            raise errors.BadRequest(f"image {image_id} failed to upload")
        try:
            keypair = self.db.keypair_get(keypair_id)
        except errors.KeypairNotFound:
            raise errors.BadRequest(f"keypair {keypair_id} not found")
        try:
            self.network_rpcapi.security_group_get(security_group_id)
        except errors.SecurityGroupNotFound:
            raise errors.BadRequest(f"security group {security_group_id} not found")
        try:
            network = self.network_rpcapi.network_get(network_id)
        except errors.NetworkNotFound:
            raise errors.BadRequest(f"network {network_id} not found")
        if network["state"] != "ACTIVE":
            raise errors.BadRequest(f"network {network_id} is not active")
        try:
            flavor_ref = self._flavor(flavor)
        except errors.FlavorNotFound:
            raise errors.BadRequest(f"flavor {flavor} not found")
        if image.attributes["min_disk"] > flavor_ref.attributes["disk_gb"]:
            raise errors.BadRequest("flavor disk is smaller than the image minimum")
        instance = self.db.instance_create(
            name,
            image_id=image.id,
            keypair_id=keypair.id,
            key_fingerprint=keypair.attributes["fingerprint"],
            security_group_id=security_group_id,
            network_id=network_id,
            flavor=flavor_ref.name,
            vcpus=flavor_ref.attributes["vcpus"],
            memory_mb=flavor_ref.attributes["memory_mb"],
        )
        self.log.info("Accepted build request for instance %s (%s)", instance.id, name)
        self.compute_rpcapi.build_instance(instance.id)
        return instance.id

    def get_instance(self, instance_id):
        instance = self.db.instance_get(instance_id)
        return instance.view()
