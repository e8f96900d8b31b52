"""Declared resource lifecycles.

Each kind maps to (initial states, allowed transitions).  The datastore
rejects any state change not listed here.
"""

LIFECYCLES = {
    "image": ({"QUEUED"}, {("QUEUED", "ACTIVE"), ("QUEUED", "ERROR")}),
    "instance": ({"BUILDING"}, {("BUILDING", "ACTIVE"), ("BUILDING", "ERROR")}),
    "volume": ({"CREATING"}, {("CREATING", "AVAILABLE"), ("CREATING", "ERROR"), ("AVAILABLE", "IN_USE")}),
    "network": ({"BUILD"}, {("BUILD", "ACTIVE"), ("BUILD", "ERROR")}),
    "router": ({"BUILD"}, {("BUILD", "ACTIVE"), ("BUILD", "ERROR")}),
    "floating_ip": ({"DOWN"}, {("DOWN", "ACTIVE")}),
    "port": ({"DOWN"}, {("DOWN", "ACTIVE")}),
    "subnet": ({"CREATED"}, set()),
    "router_interface": ({"CREATED"}, set()),
    "keypair": ({"CREATED"}, set()),
    "security_group": ({"CREATED"}, set()),
    "security_group_rule": ({"CREATED"}, set()),
    "volume_attachment": ({"CREATED"}, set()),
    "host": ({"UP"}, {("UP", "DOWN"), ("DOWN", "UP")}),
    "flavor": ({"CREATED"}, set()),
    "ip_pool": ({"CREATED"}, set()),
    "volume_backend": ({"UP"}, set()),
    "l3_agent": ({"UP"}, set()),
    "sentinel": ({"CREATED"}, set()),
}

ID_PREFIX = {
    "image": "img",
    "instance": "inst",
    "volume": "vol",
    "network": "net",
    "router": "rtr",
    "floating_ip": "fip",
    "port": "port",
    "subnet": "snet",
    "router_interface": "rif",
    "keypair": "kp",
    "security_group": "sg",
    "security_group_rule": "sgr",
    "volume_attachment": "att",
    "host": "host",
    "flavor": "flv",
    "ip_pool": "pool",
    "volume_backend": "be",
    "l3_agent": "l3",
    "sentinel": "snt",
}


def is_legal_initial(kind, state):
    return state in LIFECYCLES[kind][0]


def is_legal_transition(kind, old, new):
    return old == new or (old, new) in LIFECYCLES[kind][1]
