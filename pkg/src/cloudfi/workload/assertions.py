"""The thirteen assertion checks evaluated between workload steps.

Each predicate is a pure function of a state dict holding resource views as
returned by the ``get_*`` endpoints (``None`` when a lookup failed).  It
returns ``(passed, reason)``.
"""

from dataclasses import dataclass
from typing import Callable

COMPUTE, VOLUME, NETWORK = "compute", "volume", "network"
SUBSYSTEMS = (COMPUTE, VOLUME, NETWORK)

PROBE_PORT = 22
OPEN_CIDR = "0.0.0.0/0"
ISCSI_PORT = ":3260"


class Unreadable(Exception):
    pass


def _need(state, *keys, kind=dict):
    if not isinstance(state, dict):
        raise Unreadable("no state")
    out = []
    for key in keys:
        value = state.get(key)
        if not isinstance(value, kind):
            raise Unreadable(f"{key} unreadable")
        out.append(value)
    return out[0] if len(out) == 1 else out


def _in_state(view, wanted):
    if view.get("state") == wanted:
        return True, ""
    return False, f"{view.get('kind', 'resource')} {view.get('id')} is {view.get('state')}, expected {wanted}"


def image_active(state):
    return _in_state(_need(state, "image"), "ACTIVE")


def keypair_ok(state):
    kp = _need(state, "keypair")
    if kp.get("state") != "CREATED":
        return False, f"keypair state {kp.get('state')}"
    if not kp.get("public_key") or not kp.get("fingerprint"):
        return False, "keypair lacks key material"
    return True, ""


def _rule_admits_ssh(rule):
    try:
        return (
            rule.get("direction") == "ingress"
            and rule.get("protocol") == "tcp"
            and rule.get("remote_cidr") == OPEN_CIDR
            and rule["port_min"] <= PROBE_PORT <= rule["port_max"]
        )
    except (KeyError, TypeError):
        return False


def security_group_ok(state):
    group = _need(state, "security_group")
    if group.get("state") != "CREATED":
        return False, f"security group state {group.get('state')}"
    rules = group.get("rules") or []
    if not any(isinstance(r, dict) and _rule_admits_ssh(r) for r in rules):
        return False, "no ingress rule admits tcp/22"
    return True, ""


def network_active(state):
    return _in_state(_need(state, "network"), "ACTIVE")


def subnet_created(state):
    subnet, network = _need(state, "subnet", "network")
    if subnet.get("state") != "CREATED":
        return False, f"subnet state {subnet.get('state')}"
    if subnet.get("network_id") != network.get("id"):
        return False, "subnet is not on the private network"
    if state.get("cidr") is not None and subnet.get("cidr") != state["cidr"]:
        return False, f"subnet cidr {subnet.get('cidr')} differs from requested {state['cidr']}"
    return True, ""


def router_active(state):
    router = _need(state, "router")
    ok, reason = _in_state(router, "ACTIVE")
    if ok and not router.get("gateway_ip"):
        return False, "router has no gateway"
    return ok, reason


def router_interface_created(state):
    iface, router, subnet = _need(state, "router_interface", "router", "subnet")
    if iface.get("state") != "CREATED":
        return False, f"interface state {iface.get('state')}"
    if iface.get("router_id") != router.get("id") or iface.get("subnet_id") != subnet.get("id"):
        return False, "interface does not join the router to the subnet"
    if iface.get("id") not in (router.get("interface_ids") or []):
        return False, "router does not list the interface"
    return True, ""


def instance_active(state):
    return _in_state(_need(state, "instance"), "ACTIVE")


def volume_created(state):
    return _in_state(_need(state, "volume"), "AVAILABLE")


def volume_attached(state):
    volume, instance, attachment = _need(state, "volume", "instance", "attachment")
    if volume.get("state") != "IN_USE":
        return False, f"volume state {volume.get('state')}"
    if volume.get("instance_id") != instance.get("id"):
        return False, "volume does not reference the instance"
    if volume.get("id") not in (instance.get("attached_volume_ids") or []):
        return False, "instance does not reference the volume"
    if attachment.get("attach_mode") != "rw":
        return False, f"attachment mode {attachment.get('attach_mode')}"
    if not str(volume.get("target_portal") or "").endswith(ISCSI_PORT):
        return False, f"bad target portal {volume.get('target_portal')}"
    return True, ""


def floating_ip_created(state):
    fip = _need(state, "floating_ip")
    if fip.get("state") != "DOWN" or not fip.get("address"):
        return False, f"floating IP state {fip.get('state')} address {fip.get('address')}"
    return True, ""


def floating_ip_added(state):
    fip, instance = _need(state, "floating_ip", "instance")
    if fip.get("state") != "ACTIVE" or fip.get("instance_id") != instance.get("id"):
        return False, "floating IP is not associated with the instance"
    if fip.get("address") not in (instance.get("floating_ips") or []):
        return False, "instance does not list the floating IP"
    return True, ""


def ssh_ok(state):
    probe = _need(state, "probe", kind=str)
    return (probe == "reachable"), ("" if probe == "reachable" else f"probe {probe}")


@dataclass(frozen=True)
class AssertionCheck:
    name: str
    subsystem: str
    description: str
    predicate: Callable


CHECKS = {c.name: c for c in (
    AssertionCheck("IMAGE_ACTIVE", COMPUTE, "the registered image reaches ACTIVE", image_active),
    AssertionCheck("KEYPAIR", COMPUTE, "the keypair exists with key material", keypair_ok),
    AssertionCheck("SECURITY_GROUP", NETWORK, "the group exists with an ingress tcp/22 rule from anywhere", security_group_ok),
    AssertionCheck("PRIVATE_NETWORK_ACTIVE", NETWORK, "the private network reaches ACTIVE", network_active),
    AssertionCheck("PRIVATE_SUBNET_CREATED", NETWORK, "the subnet exists on the network with the requested cidr", subnet_created),
    AssertionCheck("ROUTER_ACTIVE", NETWORK, "the router reaches ACTIVE with a gateway", router_active),
    AssertionCheck("ROUTER_INTERFACE_CREATED", NETWORK, "the interface joins router and subnet", router_interface_created),
    AssertionCheck("INSTANCE_ACTIVE", COMPUTE, "the instance reaches ACTIVE", instance_active),
    AssertionCheck("VOLUME_CREATED", VOLUME, "the volume reaches AVAILABLE", volume_created),
    AssertionCheck("VOLUME_ATTACHED", VOLUME, "volume and instance reference each other over a rw iSCSI export", volume_attached),
    AssertionCheck("FLOATING_IP_CREATED", NETWORK, "the floating IP exists with an address", floating_ip_created),
    AssertionCheck("FLOATING_IP_ADDED", NETWORK, "the floating IP is associated with the instance", floating_ip_added),
    AssertionCheck("SSH", COMPUTE, "the instance is reachable on tcp/22", ssh_ok),
)}

NAMES = tuple(CHECKS)


def check_assertion(name, state):
    """Evaluate one check; returns ``(passed, reason)`` and never raises on bad state."""
    check = CHECKS[name]
    try:
        passed, reason = check.predicate(state)
    except Unreadable as exc:
        return False, f"state unreadable: {exc}"
    except (AttributeError, KeyError, TypeError) as exc:
        # a view with fields of the wrong shape
        return False, f"state unreadable: {type(exc).__name__}: {exc}"
    return bool(passed), reason
