"""Network service API handlers."""

import ipaddress

from .. import errors
from ..compute.rpcapi import ComputeRPC
from . import connectivity
from .ipam import IpamDriver
from .rpcapi import NetworkRPC

EXTERNAL_NETWORK = "public"
FLOATING_POOL = "public-pool"


class NetworkAPI:
    def __init__(self, db, bus, log):
        self.db = db
        self.log = log
        self.ipam = IpamDriver(db, log)
        self.network_rpcapi = NetworkRPC(bus)
        self.compute_rpcapi = ComputeRPC(bus)

    # -- networks and subnets -------------------------------------------------
    def create_network(self, name, mtu=1450):
        if not name:
            raise errors.BadRequest("network name is required")
        network = self.db.network_create(name, mtu=mtu)
        self.log.info("Created network %s (%s)", network.id, name)
        self.network_rpcapi.activate_network(network.id)
        return network.id

    def get_network(self, network_id):
        return self.db.network_get(network_id).view()

    def create_subnet(self, network_id, cidr, gateway_ip=None, enable_dhcp=True):
        try:
            network = self.db.network_get(network_id)
        except errors.NetworkNotFound:
            raise errors.BadRequest(f"network {network_id} not found")
        try:
            net = ipaddress.ip_network(cidr)
        except ValueError as exc:
            raise errors.BadRequest(f"invalid cidr {cidr!r}: {exc}")
        if gateway_ip is None:
            gateway_ip = str(next(net.hosts()))
        subnet = self.db.subnet_create(network_id, str(net), gateway_ip, enable_dhcp=enable_dhcp, ip_version=net.version)
        self.db.network_update(network_id, subnet_ids=network.attributes["subnet_ids"] + [subnet.id])
        self.log.info("Created subnet %s %s on %s", subnet.id, net, network_id)
        return subnet.id

    def get_subnet(self, subnet_id):
        return self.db.subnet_get(subnet_id).view()

    # -- routers --------------------------------------------------------------
    def create_router(self, name):
        if not name:
            raise errors.BadRequest("router name is required")
        external = self.db.network_get_by_name(EXTERNAL_NETWORK)
        router = self.db.router_create(name, external.id)
        self.log.info("Created router %s (%s)", router.id, name)
        self.network_rpcapi.activate_router(router.id)
        return router.id

    def get_router(self, router_id):
        return self.db.router_get(router_id).view()

    def add_router_interface(self, router_id, subnet_id):
        try:
            router = self.db.router_get(router_id)
        except errors.RouterNotFound:
            raise errors.BadRequest(f"router {router_id} not found")
        try:
            subnet = self.db.subnet_get(subnet_id)
        except errors.SubnetNotFound:
            raise errors.BadRequest(f"subnet {subnet_id} not found")
        port = self.db.port_create(subnet.attributes["network_id"], subnet.attributes["gateway_ip"], "network:router_interface", router.id)
        interface = self.db.router_interface_create(router.id, subnet.id, port.id)
        self.db.router_update(router.id, interface_ids=router.attributes["interface_ids"] + [interface.id])
        self.db.port_update(port.id, state="ACTIVE")
        self.log.info("Added interface %s on subnet %s to router %s", interface.id, subnet_id, router_id)
        return interface.id

    def get_router_interface(self, interface_id):
        return self.db.router_interface_get(interface_id).view()

    # -- security groups ------------------------------------------------------
    def create_security_group(self, name, description=""):
        if not name:
            raise errors.BadRequest("security group name is required")
        if self.db.security_group_get_by_name(name) is not None:
            raise errors.Conflict(f"security group {name!r} already exists")
        group = self.db.security_group_create(name, description)
        self.log.info("Created security group %s (%s)", group.id, name)
        return group.id

    def create_security_group_rule(self, group_id, protocol="tcp", port_min=None, port_max=None, direction="ingress", remote_cidr="0.0.0.0/0"):
        try:
            group = self.db.security_group_get(group_id)
        except errors.SecurityGroupNotFound:
            raise errors.BadRequest(f"security group {group_id} not found")
        if direction not in ("ingress", "egress"):
            raise errors.BadRequest(f"invalid direction {direction!r}")
        if remote_cidr == "0.0.0.0/0":
            self.log.warning("Rule on security group %s admits %s/%s from any address", group_id, protocol, port_min)
        rule = self.db.security_group_rule_create(group.id, protocol, port_min=port_min, port_max=port_max, direction=direction, remote_cidr=remote_cidr)
        self.db.security_group_update(group.id, rule_ids=group.attributes["rule_ids"] + [rule.id])
        return rule.id

    def get_security_group(self, group_id):
        group = self.db.security_group_get(group_id)
        view = group.view()
        view["rules"] = [self.db.security_group_rule_get(rid).view() for rid in group.attributes["rule_ids"]]
        return view

    # -- floating IPs ---------------------------------------------------------
    def create_floating_ip(self, pool=FLOATING_POOL):
        try:
            pool_ref = self.db.ip_pool_get_by_name(pool)
        except errors.PoolNotFound:
            raise errors.BadRequest(f"address pool {pool} not found")
        address = self.ipam.allocate_floating_address(pool_ref.id)
        floating_ip = self.db.floating_ip_create(address, pool_ref.id)
        self.log.info("Allocated floating IP %s (%s)", floating_ip.id, address)
        return floating_ip.id

    def get_floating_ip(self, floating_ip_id):
        return self.db.floating_ip_get(floating_ip_id).view()

    def associate_floating_ip(self, floating_ip_id, instance_id):
        try:
            floating_ip = self.db.floating_ip_get(floating_ip_id)
        except errors.FloatingIpNotFound:
            raise errors.BadRequest(f"floating IP {floating_ip_id} not found")
        if floating_ip.attributes["instance_id"] is not None:
            raise errors.Conflict(f"floating IP {floating_ip_id} is already associated")
        try:
            instance = self.compute_rpcapi.instance_get_network_info(instance_id)
        except errors.InstanceNotFound:
            raise errors.BadRequest(f"instance {instance_id} not found")
        if instance["state"] != "ACTIVE":
            raise errors.InvalidState(f"instance {instance_id} is {instance['state']}")
        if not instance["port_ids"]:
            raise errors.InvalidState(f"instance {instance_id} has no port")
        port_id = instance["port_ids"][0]
        self.db.floating_ip_update(floating_ip.id, state="ACTIVE", port_id=port_id, instance_id=instance_id)
        self.compute_rpcapi.instance_add_floating_ip(instance_id, floating_ip.attributes["address"])
        self.log.info("Associated %s with instance %s", floating_ip.attributes["address"], instance_id)
        return floating_ip.id

    # -- diagnostics ----------------------------------------------------------
    def probe_connectivity(self, instance_id):
        try:
            instance = self.compute_rpcapi.instance_get_network_info(instance_id)
        except errors.InstanceNotFound:
            return "unreachable"
        ports = []
        for port_id in instance["port_ids"]:
            try:
                ports.append(self.db.port_get(port_id).view())
            except errors.PortNotFound:
                continue
        floating_ips = [f.view() for f in self.db.floating_ip_get_all_by_instance(instance_id)]
        rules = []
        try:
            group = self.db.security_group_get(instance["security_group_id"])
            rules = [self.db.security_group_rule_get(rid).view() for rid in group.attributes["rule_ids"]]
        except errors.NotFound:
            pass
        reachable = connectivity.is_reachable(instance, ports, floating_ips, rules)
        return "reachable" if reachable else "unreachable"
