"""Address allocation for fixed IPs (per subnet) and floating IPs (shared pool)."""

import ipaddress

from .. import errors


class IpamDriver:
    def __init__(self, db, log):
        self.db = db
        self.log = log

    def allocate_fixed_ip(self, subnet_id):
        subnet = self.db.subnet_get(subnet_id)
        net = ipaddress.ip_network(subnet.attributes["cidr"])
        taken = set(subnet.attributes["allocated_ips"]) | {subnet.attributes["gateway_ip"]}
        for candidate in net.hosts():
            address = str(candidate)
            if address in taken:
                continue
            self.db.subnet_update(subnet_id, allocated_ips=sorted(taken - {subnet.attributes["gateway_ip"]} | {address}))
            return address
        raise errors.AddressExhausted(f"subnet {subnet_id} has no free addresses")

    def allocate_floating_address(self, pool_id):
        pool = self.db.ip_pool_get(pool_id)
        start = ipaddress.ip_address(pool.attributes["range_start"])
        end = ipaddress.ip_address(pool.attributes["range_end"])
        allocated = pool.attributes["allocated"]
        candidate = start
        while candidate <= end:
            if str(candidate) not in allocated:
                self.db.ip_pool_update(pool_id, allocated=allocated + [str(candidate)])
                self.log.debug("Allocated %s from pool %s", candidate, pool.name)
                return str(candidate)
            candidate += 1
        raise errors.AddressExhausted(f"pool {pool.name} is exhausted")
