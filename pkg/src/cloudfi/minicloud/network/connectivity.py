"""Reachability of an instance from outside the cloud (the SSH probe)."""

PROBE_PROTOCOL = "tcp"
PROBE_PORT = 22


def rule_admits_probe(rule):
    if rule.get("direction") != "ingress":
        return False
    if rule.get("protocol") not in (PROBE_PROTOCOL, "any"):
        return False
    low, high = rule.get("port_min"), rule.get("port_max")
    if low is not None and PROBE_PORT < low:
        return False
    if high is not None and PROBE_PORT > high:
        return False
    return rule.get("remote_cidr") == "0.0.0.0/0"


def is_reachable(instance, ports, floating_ips, rules):
    """Four-condition reachability predicate over plain resource views."""
    if instance is None or instance.get("state") != "ACTIVE":
        return False
    if not any(p.get("state") == "ACTIVE" and p.get("device_id") == instance.get("id") for p in ports):
        return False
    associated = [f for f in floating_ips if f.get("instance_id") == instance.get("id") and f.get("state") == "ACTIVE"]
    if not associated or not any(f.get("address") in instance.get("floating_ips", []) for f in associated):
        return False
    return any(rule_admits_probe(r) for r in rules)
