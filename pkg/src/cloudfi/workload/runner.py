"""The fixed workload: one instance, one volume, one private network per round.

API steps are recorded as :class:`ApiOutcome` events.  The ``get_*`` and
probe queries issued by assertion checks are part of the check and are not
recorded as API outcomes.  An API error ends the round; a failed assertion
does not.
"""

import time
from dataclasses import dataclass

from .assertions import CHECKS, check_assertion
from .events import FAULT_FREE, FAULTY, ApiOutcome, AssertionResult, EventTrace, TriggerExecution


@dataclass
class WorkloadConfig:
    poll_interval: float = 0.1
    state_timeout: float = 10.0
    ssh_timeout: float = 5.0
    round_budget: float = 120.0
    volume_size: int = 1


class _Abort(Exception):
    pass


class RoundTimeout(Exception):
    pass


def round_names(tag):
    """Fresh resource names and addressing for one round."""
    n = {FAULTY: 1, FAULT_FREE: 2}.get(tag, 9)
    p = f"fi-{tag.replace('_', '')}"
    return {
        "image": f"{p}-image",
        "keypair": f"{p}-key",
        "security_group": f"{p}-sg",
        "network": f"{p}-net",
        "cidr": f"10.{n}.0.0/24",
        "router": f"{p}-router",
        "instance": f"{p}-vm",
        "volume": f"{p}-vol",
    }


class _Round:
    def __init__(self, target, tag, config):
        self.target = target
        self.tag = tag
        self.config = config
        self.trace = EventTrace(tag)
        self.context = {"round": tag}
        self.deadline = time.monotonic() + config.round_budget
        self.ids = {}

    def _check_budget(self):
        if time.monotonic() > self.deadline:
            raise RoundTimeout(f"round {self.tag} exceeded {self.config.round_budget:.0f}s")

    def _absorb(self, reply):
        for pid, ts in reply.triggers:
            self.trace.events.append(TriggerExecution(pid, ts))

    def now(self):
        return self.target.call("admin.now").result

    def api(self, endpoint, **params):
        self._check_budget()
        start = self.now()
        reply = self.target.call(endpoint, params, self.context)
        self._absorb(reply)
        subsystem = endpoint.split(".", 1)[0]
        if reply.ok:
            self.trace.events.append(ApiOutcome(endpoint, subsystem, start, reply.now, True))
            return reply.result
        err = reply.error or {}
        self.trace.events.append(ApiOutcome(endpoint, subsystem, start, reply.now, False, err.get("code"), err.get("status"), err.get("message"), err.get("subsystem")))
        self.trace.aborted = True
        raise _Abort()

    def query(self, endpoint, **params):
        self._check_budget()
        reply = self.target.call(endpoint, params, self.context)
        self._absorb(reply)
        return reply.result if reply.ok else None

    def wait(self, seconds):
        self._absorb(self.target.wait(seconds))

    def record(self, name, state):
        passed, reason = check_assertion(name, state)
        self.trace.events.append(AssertionResult(name, CHECKS[name].subsystem, passed, self.now(), reason))

    def poll(self, name, fetch, timeout=None):
        """Re-evaluate ``name`` until it passes, hits ERROR or times out."""
        timeout = self.config.state_timeout if timeout is None else timeout
        give_up = self.now() + timeout
        while True:
            state = fetch()
            passed, _ = check_assertion(name, state)
            failed_hard = any(isinstance(v, dict) and v.get("state") == "ERROR" for v in state.values())
            if passed or failed_hard or self.now() >= give_up:
                self.record(name, state)
                return
            self.wait(self.config.poll_interval)

    def run(self):
        names = round_names(self.tag)
        ids = self.ids
        q = self.query

        ids["image"] = self.api("compute.register_image", name=names["image"])
        self.poll("IMAGE_ACTIVE", lambda: {"image": q("compute.get_image", image_id=ids["image"])})

        ids["keypair"] = self.api("compute.create_keypair", name=names["keypair"])
        self.record("KEYPAIR", {"keypair": q("compute.get_keypair", keypair_id=ids["keypair"])})
        ids["security_group"] = self.api("network.create_security_group", name=names["security_group"])
        self.api("network.create_security_group_rule", group_id=ids["security_group"], protocol="tcp", port_min=22, port_max=22, direction="ingress", remote_cidr="0.0.0.0/0")
        self.record("SECURITY_GROUP", {"security_group": q("network.get_security_group", group_id=ids["security_group"])})

        ids["network"] = self.api("network.create_network", name=names["network"])
        self.poll("PRIVATE_NETWORK_ACTIVE", lambda: {"network": q("network.get_network", network_id=ids["network"])})
        ids["subnet"] = self.api("network.create_subnet", network_id=ids["network"], cidr=names["cidr"])
        self.record("PRIVATE_SUBNET_CREATED", {
            "subnet": q("network.get_subnet", subnet_id=ids["subnet"]),
            "network": q("network.get_network", network_id=ids["network"]),
            "cidr": names["cidr"],
        })
        ids["router"] = self.api("network.create_router", name=names["router"])
        self.poll("ROUTER_ACTIVE", lambda: {"router": q("network.get_router", router_id=ids["router"])})
        ids["router_interface"] = self.api("network.add_router_interface", router_id=ids["router"], subnet_id=ids["subnet"])
        self.record("ROUTER_INTERFACE_CREATED", {
            "router_interface": q("network.get_router_interface", interface_id=ids["router_interface"]),
            "router": q("network.get_router", router_id=ids["router"]),
            "subnet": q("network.get_subnet", subnet_id=ids["subnet"]),
        })

        ids["instance"] = self.api("compute.boot_instance", name=names["instance"], image_id=ids["image"], keypair_id=ids["keypair"],
                                   security_group_id=ids["security_group"], network_id=ids["network"])
        self.poll("INSTANCE_ACTIVE", lambda: {"instance": q("compute.get_instance", instance_id=ids["instance"])})

        ids["volume"] = self.api("volume.create_volume", name=names["volume"], size=self.config.volume_size)
        self.poll("VOLUME_CREATED", lambda: {"volume": q("volume.get_volume", volume_id=ids["volume"])})
        ids["attachment"] = self.api("volume.attach_volume", volume_id=ids["volume"], instance_id=ids["instance"])
        self.record("VOLUME_ATTACHED", {
            "volume": q("volume.get_volume", volume_id=ids["volume"]),
            "instance": q("compute.get_instance", instance_id=ids["instance"]),
            "attachment": q("volume.get_volume_attachment", attachment_id=ids["attachment"]),
        })

        ids["floating_ip"] = self.api("network.create_floating_ip")
        self.record("FLOATING_IP_CREATED", {"floating_ip": q("network.get_floating_ip", floating_ip_id=ids["floating_ip"])})
        self.api("network.associate_floating_ip", floating_ip_id=ids["floating_ip"], instance_id=ids["instance"])
        self.record("FLOATING_IP_ADDED", {
            "floating_ip": q("network.get_floating_ip", floating_ip_id=ids["floating_ip"]),
            "instance": q("compute.get_instance", instance_id=ids["instance"]),
        })

        self.poll("SSH", lambda: {"probe": q("network.probe_connectivity", instance_id=ids["instance"])}, timeout=self.config.ssh_timeout)


def run_workload(target, round_tag, config=None):
    """Run one round against ``target`` and return its :class:`EventTrace`.

    Transport errors and :class:`RoundTimeout` propagate to the caller, which
    treats the experiment as invalid.
    """
    rnd = _Round(target, round_tag, config or WorkloadConfig())
    try:
        rnd.run()
    except _Abort:
        pass
    return rnd.trace
