from .. import errors


class NetworkDB:
    def __init__(self, store):
        self.store = store

    def _get(self, kind, rid, exc):
        res = self.store.get(kind, rid)
        if res is None:
            raise exc(f"{kind} {rid} could not be found")
        return res

    def _update(self, kind, rid, exc, state=None, **values):
        self._get(kind, rid, exc)
        return self.store.update(kind, rid, state=state, **values)

    # networks
    def network_create(self, name, mtu=1450, external=False):
        return self.store.create("network", name, "BUILD", {"mtu": mtu, "external": external, "subnet_ids": []})

    def network_get(self, network_id):
        return self._get("network", network_id, errors.NetworkNotFound)

    def network_get_by_name(self, name):
        found = self.store.find("network", name=name)
        if not found:
            raise errors.NetworkNotFound(f"network {name} could not be found")
        return found[0]

    def network_update(self, network_id, state=None, **values):
        return self._update("network", network_id, errors.NetworkNotFound, state=state, **values)

    # subnets
    def subnet_create(self, network_id, cidr, gateway_ip, enable_dhcp=True, name=None, ip_version=None):
        # ip_version is required by the schema but has no usable default
        if ip_version not in (4, 6):
            raise errors.BadRequest(f"subnet ip_version must be 4 or 6, got {ip_version!r}")
        return self.store.create("subnet", name or f"subnet-{cidr}", "CREATED", {
            "network_id": network_id,
            "cidr": cidr,
            "ip_version": ip_version,
            "gateway_ip": gateway_ip,
            "enable_dhcp": enable_dhcp,
            "allocated_ips": [],
        })

    def subnet_get(self, subnet_id):
        return self._get("subnet", subnet_id, errors.SubnetNotFound)

    def subnet_update(self, subnet_id, **values):
        return self._update("subnet", subnet_id, errors.SubnetNotFound, **values)

    # routers
    def router_create(self, name, external_network_id):
        return self.store.create("router", name, "BUILD", {"external_network_id": external_network_id, "gateway_ip": None, "interface_ids": [], "agent_id": None})

    def router_get(self, router_id):
        return self._get("router", router_id, errors.RouterNotFound)

    def router_update(self, router_id, state=None, **values):
        return self._update("router", router_id, errors.RouterNotFound, state=state, **values)

    def router_interface_create(self, router_id, subnet_id, port_id):
        return self.store.create("router_interface", f"{router_id}:{subnet_id}", "CREATED", {"router_id": router_id, "subnet_id": subnet_id, "port_id": port_id})

    def router_interface_get(self, interface_id):
        return self._get("router_interface", interface_id, errors.NotFound)

    def l3_agent_get_by_name(self, name):
        found = self.store.find("l3_agent", name=name)
        if not found:
            raise errors.NotFound(f"l3 agent {name} could not be found")
        return found[0]

    def l3_agent_update(self, agent_id, **values):
        return self._update("l3_agent", agent_id, errors.NotFound, **values)

    # ports
    def port_create(self, network_id, fixed_ip, device_owner, device_id, security_group_ids=None):
        return self.store.create("port", f"port-{fixed_ip}", "DOWN", {
            "network_id": network_id,
            "fixed_ip": fixed_ip,
            "device_owner": device_owner,
            "device_id": device_id,
            "security_group_ids": list(security_group_ids or []),
            "binding_host": None,
        })

    def port_get(self, port_id):
        return self._get("port", port_id, errors.PortNotFound)

    def port_update(self, port_id, state=None, **values):
        return self._update("port", port_id, errors.PortNotFound, state=state, **values)

    # security groups
    def security_group_create(self, name, description=""):
        return self.store.create("security_group", name, "CREATED", {"description": description, "rule_ids": []})

    def security_group_get(self, group_id):
        return self._get("security_group", group_id, errors.SecurityGroupNotFound)

    def security_group_get_by_name(self, name):
        found = self.store.find("security_group", name=name)
        return found[0] if found else None

    def security_group_update(self, group_id, **values):
        return self._update("security_group", group_id, errors.SecurityGroupNotFound, **values)

    def security_group_rule_create(self, group_id, protocol, port_min=None, port_max=None, direction="egress", remote_cidr="0.0.0.0/0"):
        return self.store.create("security_group_rule", f"{group_id}:{direction}:{protocol}", "CREATED", {
            "group_id": group_id,
            "protocol": protocol,
            "port_min": port_min,
            "port_max": port_max,
            "direction": direction,
            "remote_cidr": remote_cidr,
        })

    def security_group_rule_get(self, rule_id):
        return self._get("security_group_rule", rule_id, errors.NotFound)

    # floating ips
    def ip_pool_get_by_name(self, name):
        found = self.store.find("ip_pool", name=name)
        if not found:
            raise errors.PoolNotFound(f"address pool {name} could not be found")
        return found[0]

    def ip_pool_get(self, pool_id):
        return self._get("ip_pool", pool_id, errors.PoolNotFound)

    def ip_pool_update(self, pool_id, **values):
        return self._update("ip_pool", pool_id, errors.PoolNotFound, **values)

    def floating_ip_create(self, address, pool_id):
        for existing in self.store.find("floating_ip", address=address):
            raise errors.Conflict(f"floating address {address} already in use by {existing.id}")
        return self.store.create("floating_ip", address, "DOWN", {"address": address, "pool_id": pool_id, "port_id": None, "instance_id": None})

    def floating_ip_get(self, floating_ip_id):
        return self._get("floating_ip", floating_ip_id, errors.FloatingIpNotFound)

    def floating_ip_get_all_by_instance(self, instance_id):
        return self.store.find("floating_ip", instance_id=instance_id)

    def floating_ip_update(self, floating_ip_id, state=None, **values):
        return self._update("floating_ip", floating_ip_id, errors.FloatingIpNotFound, state=state, **values)
