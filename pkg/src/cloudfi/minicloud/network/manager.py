"""Network manager: asynchronous activation, port allocation and binding."""

from .. import errors
from .api import EXTERNAL_NETWORK, FLOATING_POOL
from .ipam import IpamDriver

L3_AGENT = "l3-agent-1"


class NetworkManager:
    RPC_METHODS = frozenset({
        "activate_network",
        "activate_router",
        "network_get",
        "security_group_get",
        "allocate_port_for_instance",
        "bind_port_to_host",
    })

    def __init__(self, db, bus, log):
        self.db = db
        self.log = log
        self.ipam = IpamDriver(db, log)

    def activate_network(self, network_id):
        network = self.db.network_get(network_id)
        self.log.debug("Provisioning segment for network %s (mtu %s)", network.id, network.attributes["mtu"])
        self.db.network_update(network_id, state="ACTIVE", segmentation_id=100 + int(network.id.split("-")[1]))
        self.log.info("Network %s is active", network_id)

    def activate_router(self, router_id):
        router = self.db.router_get(router_id)
        try:
            agent = self.db.l3_agent_get_by_name(L3_AGENT)
            pool = self.db.ip_pool_get_by_name(FLOATING_POOL)
            gateway_ip = self.ipam.allocate_floating_address(pool.id)
        except (errors.NotFound, errors.AddressExhausted) as exc:
            self.log.error("Router %s could not be scheduled: %s", router_id, exc)
            self.db.router_update(router_id, state="ERROR")
            return
        self.db.l3_agent_update(agent.id, router_ids=agent.attributes["router_ids"] + [router.id])
        self.db.router_update(router_id, state="ACTIVE", gateway_ip=gateway_ip, agent_id=agent.id)
        self.log.info("Router %s is active on %s with gateway %s", router_id, agent.name, gateway_ip)

    def network_get(self, network_id):
        return self.db.network_get(network_id).view()

    def security_group_get(self, group_id):
        return self.db.security_group_get(group_id).view()

    def allocate_port_for_instance(self, instance_id, network_id, security_group_id):
        network = self.db.network_get(network_id)
        if network.attributes["external"]:
            raise errors.BadRequest("instances cannot be plugged into the external network")
        if not network.attributes["subnet_ids"]:
            raise errors.InvalidState(f"network {network_id} has no subnet")
        subnet_id = network.attributes["subnet_ids"][0]
        fixed_ip = self.ipam.allocate_fixed_ip(subnet_id)
        port = self.db.port_create(network.id, fixed_ip, "compute:nova", instance_id, security_group_ids=[security_group_id])
        self.log.debug("Allocated port %s (%s) for instance %s", port.id, fixed_ip, instance_id)
        return port.view()

    def bind_port_to_host(self, port_id, host_id):
        port = self.db.port_get(port_id)
        self.db.port_update(port.id, state="ACTIVE", binding_host=host_id)
        self.log.debug("Port %s bound to %s", port_id, host_id)
        return port_id
