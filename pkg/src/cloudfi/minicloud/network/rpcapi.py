TOPIC = "network"


class NetworkRPC:
    def __init__(self, bus):
        self.bus = bus

    def activate_network(self, network_id, delay=0.2):
        self.bus.cast(TOPIC, "activate_network", delay=delay, network_id=network_id)

    def activate_router(self, router_id, delay=0.3):
        self.bus.cast(TOPIC, "activate_router", delay=delay, router_id=router_id)

    def network_get(self, network_id):
        return self.bus.call(TOPIC, "network_get", network_id=network_id)

    def security_group_get(self, group_id):
        return self.bus.call(TOPIC, "security_group_get", group_id=group_id)

    def allocate_port_for_instance(self, instance_id, network_id, security_group_id):
        return self.bus.call(TOPIC, "allocate_port_for_instance", instance_id=instance_id, network_id=network_id, security_group_id=security_group_id)

    def bind_port_to_host(self, port_id, host_id):
        return self.bus.call(TOPIC, "bind_port_to_host", port_id=port_id, host_id=host_id)
