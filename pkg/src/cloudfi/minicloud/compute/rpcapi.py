"""Client side of the compute message topic."""

TOPIC = "compute"


class ComputeRPC:
    def __init__(self, bus):
        self.bus = bus

    def activate_image(self, image_id, delay=0.3):
        self.bus.cast(TOPIC, "activate_image", delay=delay, image_id=image_id)

    def build_instance(self, instance_id, delay=0.2):
        self.bus.cast(TOPIC, "build_instance", delay=delay, instance_id=instance_id)

    def instance_get_for_attach(self, instance_id):
        return self.bus.call(TOPIC, "instance_get_for_attach", instance_id=instance_id)

    def instance_get_network_info(self, instance_id):
        return self.bus.call(TOPIC, "instance_get_network_info", instance_id=instance_id)

    def get_volume_connector(self, instance_id):
        return self.bus.call(TOPIC, "get_volume_connector", instance_id=instance_id)

    def instance_attach_volume(self, instance_id, volume_id, device):
        return self.bus.call(TOPIC, "instance_attach_volume", instance_id=instance_id, volume_id=volume_id, device=device)

    def instance_add_floating_ip(self, instance_id, address):
        return self.bus.call(TOPIC, "instance_add_floating_ip", instance_id=instance_id, address=address)
