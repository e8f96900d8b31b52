"""Convenience client with the composite operations used by end users.

Each composite runs its steps in order and stops at the first failing one,
raising :class:`StepFailed` that names the step; resources created by
earlier steps are left in place.
"""

from .errors import ApiError


class StepFailed(Exception):
    def __init__(self, step, error, done):
        super().__init__(f"{step} failed: {error}")
        self.step, self.error, self.done = step, error, done


class Client:
    def __init__(self, cloud, context=None):
        self.cloud = cloud
        self.context = context

    def call(self, endpoint, **params):
        return self.cloud.request(endpoint, params, self.context)

    def wait(self, seconds):
        return self.cloud.wait(seconds)

    def _steps(self, steps, done=None):
        done = dict(done or {})
        for key, endpoint, params in steps:
            try:
                done[key] = self.call(endpoint, **params(done))
            except ApiError as exc:
                raise StepFailed(key, exc, dict(done)) from exc
        return done

    def register_image(self, name, settle=1.0):
        image_id = self.call("compute.register_image", name=name)
        self.wait(settle)
        return image_id

    def create_access_artifacts(self, prefix="app", port=22):
        return self._steps([
            ("keypair", "compute.create_keypair", lambda d: {"name": f"{prefix}-key"}),
            ("security_group", "network.create_security_group", lambda d: {"name": f"{prefix}-sg"}),
            ("rule", "network.create_security_group_rule", lambda d: {"group_id": d["security_group"], "protocol": "tcp", "port_min": port, "port_max": port, "direction": "ingress"}),
        ])

    def provision_network(self, prefix="app", cidr="10.0.0.0/24", settle=1.0):
        done = self._steps([("network", "network.create_network", lambda d: {"name": f"{prefix}-net"})])
        self.wait(settle)
        done = self._steps([
            ("subnet", "network.create_subnet", lambda d: {"network_id": d["network"], "cidr": cidr}),
            ("router", "network.create_router", lambda d: {"name": f"{prefix}-router"}),
        ], done)
        self.wait(settle)
        return self._steps([
            ("router_interface", "network.add_router_interface", lambda d: {"router_id": d["router"], "subnet_id": d["subnet"]}),
        ], done)

    def boot_instance(self, name, image_id, keypair_id, security_group_id, network_id, settle=1.0):
        instance_id = self.call("compute.boot_instance", name=name, image_id=image_id, keypair_id=keypair_id,
                                security_group_id=security_group_id, network_id=network_id)
        self.wait(settle)
        return instance_id

    def create_volume(self, name, size=1, settle=1.0):
        volume_id = self.call("volume.create_volume", name=name, size=size)
        self.wait(settle)
        return volume_id

    def attach_volume(self, instance_id, volume_id):
        return self.call("volume.attach_volume", volume_id=volume_id, instance_id=instance_id)

    def allocate_floating_ip(self, instance_id):
        done = self._steps([
            ("floating_ip", "network.create_floating_ip", lambda d: {}),
            ("association", "network.associate_floating_ip", lambda d: {"floating_ip_id": d["floating_ip"], "instance_id": instance_id}),
        ])
        return done["floating_ip"]

    def probe_connectivity(self, instance_id):
        return self.call("network.probe_connectivity", instance_id=instance_id)
