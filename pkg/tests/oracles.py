"""Independent reference implementations used to cross-check the package.

Nothing here imports from ``cloudfi``.  Each oracle is written from the
contract directly and, where possible, by a different route than the code
under test (runtime introspection instead of AST signature parsing, a single
forward pass instead of index arithmetic, exact fractions instead of floats).
"""

import ast
import inspect
import math
from collections import Counter, defaultdict
from fractions import Fraction

# -- injection point enumeration ---------------------------------------------

def name_matches(name, keywords):
    """A callee matches when a keyword starts at the beginning of the name or
    right after an underscore.  Capitalised names are constructors."""
    if not name or name[0].isupper():
        return False
    for i in range(len(name)):
        if i == 0 or name[i - 1] == "_":
            if any(name.startswith(kw, i) for kw in keywords):
                return True
    return False


def _callee(call):
    f = call.func
    return f.id if isinstance(f, ast.Name) else f.attr if isinstance(f, ast.Attribute) else None


def _span(node):
    return (node.lineno, node.col_offset, node.end_lineno, node.end_col_offset)


class _Runtime:
    """Callee signatures obtained by executing the module and using inspect."""

    def __init__(self, namespace):
        self.functions = defaultdict(list)
        self.methods = defaultdict(list)
        for name, obj in namespace.items():
            if inspect.isfunction(obj):
                self.functions[name].append(inspect.signature(obj))
            elif inspect.isclass(obj):
                for attr, member in vars(obj).items():
                    if inspect.isfunction(member):
                        params = list(inspect.signature(member).parameters.values())[1:]
                        self.methods[attr].append(inspect.Signature(params))

    def signature(self, call):
        name = _callee(call)
        sigs = list(self.functions.get(name, []))
        if isinstance(call.func, ast.Attribute):
            sigs += self.methods.get(name, [])
        if not sigs or len({str(s) for s in sigs}) != 1:
            return None
        return sigs[0]


def _binds_to_default(sig, call, index):
    if any(isinstance(a, ast.Starred) for a in call.args[: index + 1]):
        return False
    if any(k.arg is None for k in call.keywords) and index >= len(call.args):
        if call.keywords[index - len(call.args)].arg is None:
            return False
    marks = [object() for _ in range(len(call.args) + len(call.keywords))]
    args = [m for a, m in zip(call.args, marks) if not isinstance(a, ast.Starred)]
    kwargs = {k.arg: marks[len(call.args) + j] for j, k in enumerate(call.keywords) if k.arg is not None}
    try:
        bound = sig.bind_partial(*args, **kwargs)
    except TypeError:
        return False
    for pname, value in bound.arguments.items():
        if value is marks[index]:
            param = sig.parameters[pname]
            return param.default is not inspect.Parameter.empty and param.kind not in (
                inspect.Parameter.VAR_POSITIONAL, inspect.Parameter.VAR_KEYWORD)
    return False


def enumerate_points(source, keywords, namespace=None):
    """Brute-force (span, bug type, operand) triples for one module."""
    tree = ast.parse(source)
    runtime = _Runtime(namespace or {})
    out = []

    def visit(node, depth, parent):
        here = depth + isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef, ast.Lambda))
        if isinstance(node, ast.Call) and depth > 0 and name_matches(_callee(node), keywords):
            span = _span(node)
            out.append((span, "MISSING_FUNC_CALL", None))
            sig = runtime.signature(node)
            operands = list(node.args) + list(node.keywords)
            for i, op in enumerate(operands):
                value = op.value if isinstance(op, ast.keyword) else op
                splat = isinstance(op, ast.keyword) and op.arg is None
                if not splat and not isinstance(value, ast.Starred) and not (
                        isinstance(value, ast.Constant) and value.value is None):
                    out.append((span, "WRONG_PARAM_VALUE", i))
                if sig is not None and _binds_to_default(sig, node, i):
                    out.append((span, "MISSING_PARAM", i))
            if not isinstance(parent, ast.Expr):
                out.append((span, "WRONG_RETURN_VALUE", 0))
        if isinstance(node, ast.Try) and depth > 0:
            body_calls = [n for s in node.body for n in ast.walk(s)
                          if isinstance(n, ast.Call) and name_matches(_callee(n), keywords)]
            if body_calls:
                for h in node.handlers:
                    out.append((_span(h), "MISSING_EXC_HANDLER", None))
        for child in ast.iter_child_nodes(node):
            visit(child, here, node)

    visit(tree, 0, None)
    return sorted(out, key=lambda t: (t[0], t[1], -1 if t[2] is None else t[2]))


# -- failure classification ---------------------------------------------------

def oracle_failure_class(events):
    """Single forward pass over ordered events (dicts with type/ok/timestamp)."""
    earliest_failed_assertion = None
    for e in events:
        if e["type"] == "assertion" and not e["ok"]:
            t = e["timestamp"]
            if earliest_failed_assertion is None or t < earliest_failed_assertion:
                earliest_failed_assertion = t
        elif e["type"] == "api" and not e["ok"]:
            if earliest_failed_assertion is not None and earliest_failed_assertion < e["timestamp"]:
                return "ASSERTION_THEN_API"
            return "API_ERROR_ONLY"
    return "NO_FAILURE" if earliest_failed_assertion is None else "ASSERTION_ONLY"


def oracle_round(faulty_events, fault_free_events):
    def bad(events):
        return sum(1 for e in events if e["type"] in ("assertion", "api") and not e["ok"]) > 0
    if bad(fault_free_events):
        return "FAULT_FREE_PROPAGATED"
    return "FAULTY_ONLY" if bad(faulty_events) else "NONE"


def oracle_logged(severities):
    """Logged iff the highest severity seen in the faulty round is ERROR or above."""
    return max(severities, default=0) >= 40


# -- latency ------------------------------------------------------------------

def oracle_latency(events):
    """Exact latency of the first API error: end minus the last earlier trigger."""
    last_trigger = None
    for e in events:
        if e["type"] == "trigger":
            last_trigger = Fraction(e["timestamp"])
        elif e["type"] == "api" and not e["ok"]:
            if last_trigger is None:
                return None
            return Fraction(e["end"]) - last_trigger
    return None


def oracle_nearest_rank(values, pct):
    ordered = sorted(values)
    rank = math.ceil(Fraction(pct) * len(ordered) / 100)
    return ordered[max(rank, 1) - 1]


def oracle_stats(values):
    n = len(values)
    return {
        "n": n,
        "mean": sum(values, Fraction(0)) / n,
        "p50": oracle_nearest_rank(values, 50),
        "p90": oracle_nearest_rank(values, 90),
        "p99": oracle_nearest_rank(values, 99),
    }


# -- propagation graph --------------------------------------------------------

def oracle_graph(records):
    """records: (injected subsystem, events).  Counts edges by brute force."""
    inj_assert, assert_api, inj_api = Counter(), Counter(), Counter()
    failed = spatial = 0
    for injected, events in records:
        bad_asserts = [e for e in events if e["type"] == "assertion" and not e["ok"]]
        bad_apis = [e for e in events if e["type"] == "api" and not e["ok"]]
        if not bad_asserts and not bad_apis:
            continue
        failed += 1
        api = bad_apis[0] if bad_apis else None
        if bad_asserts:
            lowest = min(e["timestamp"] for e in bad_asserts)
            first = next(e for e in bad_asserts if e["timestamp"] == lowest)
            inj_assert[(injected, first["name"])] += 1
            if api is not None:
                assert_api[(first["name"], api["subsystem"])] += 1
        elif api is not None:
            inj_api[(injected, api["subsystem"])] += 1
        touched = {e["subsystem"] for e in bad_asserts} | ({api["subsystem"]} if api else set())
        if touched - {injected}:
            spatial += 1
    return {"inj_to_assertion": inj_assert, "assertion_to_api": assert_api,
            "inj_to_api": inj_api, "failed": failed, "spatial": spatial}


# -- assertion predicates -----------------------------------------------------

def _d(state, key):
    v = state.get(key) if isinstance(state, dict) else None
    return v if isinstance(v, str if key == "probe" else dict) else None


def oracle_assertion(name, state):
    """Pass/fail of each check; any unreadable input is a failure."""
    g = {k: _d(state, k) for k in ("image", "keypair", "security_group", "network", "subnet", "router",
                                   "router_interface", "instance", "volume", "attachment",
                                   "floating_ip", "probe")}
    need = {
        "IMAGE_ACTIVE": ["image"], "KEYPAIR": ["keypair"], "SECURITY_GROUP": ["security_group"],
        "PRIVATE_NETWORK_ACTIVE": ["network"], "PRIVATE_SUBNET_CREATED": ["subnet", "network"],
        "ROUTER_ACTIVE": ["router"], "ROUTER_INTERFACE_CREATED": ["router_interface", "router", "subnet"],
        "INSTANCE_ACTIVE": ["instance"], "VOLUME_CREATED": ["volume"],
        "VOLUME_ATTACHED": ["volume", "instance", "attachment"], "FLOATING_IP_CREATED": ["floating_ip"],
        "FLOATING_IP_ADDED": ["floating_ip", "instance"], "SSH": ["probe"],
    }[name]
    if any(g[k] is None for k in need):
        return False
    s = lambda k, f: g[k].get(f)  # noqa: E731
    if name == "IMAGE_ACTIVE":
        return s("image", "state") == "ACTIVE"
    if name == "KEYPAIR":
        return s("keypair", "state") == "CREATED" and bool(s("keypair", "public_key")) and bool(s("keypair", "fingerprint"))
    if name == "SECURITY_GROUP":
        def admits(r):
            if not isinstance(r, dict):
                return False
            lo, hi = r.get("port_min"), r.get("port_max")
            ports_ok = isinstance(lo, int) and isinstance(hi, int) and lo <= 22 <= hi
            return (r.get("direction"), r.get("protocol"), r.get("remote_cidr")) == ("ingress", "tcp", "0.0.0.0/0") and ports_ok
        return s("security_group", "state") == "CREATED" and any(admits(r) for r in (s("security_group", "rules") or []))
    if name == "PRIVATE_NETWORK_ACTIVE":
        return s("network", "state") == "ACTIVE"
    if name == "PRIVATE_SUBNET_CREATED":
        cidr = state.get("cidr")
        return (s("subnet", "state") == "CREATED" and s("subnet", "network_id") == s("network", "id")
                and (cidr is None or s("subnet", "cidr") == cidr))
    if name == "ROUTER_ACTIVE":
        return s("router", "state") == "ACTIVE" and bool(s("router", "gateway_ip"))
    if name == "ROUTER_INTERFACE_CREATED":
        return (s("router_interface", "state") == "CREATED"
                and s("router_interface", "router_id") == s("router", "id")
                and s("router_interface", "subnet_id") == s("subnet", "id")
                and s("router_interface", "id") in (s("router", "interface_ids") or []))
    if name == "INSTANCE_ACTIVE":
        return s("instance", "state") == "ACTIVE"
    if name == "VOLUME_CREATED":
        return s("volume", "state") == "AVAILABLE"
    if name == "VOLUME_ATTACHED":
        return (s("volume", "state") == "IN_USE" and s("volume", "instance_id") == s("instance", "id")
                and s("volume", "id") in (s("instance", "attached_volume_ids") or [])
                and s("attachment", "attach_mode") == "rw"
                and str(s("volume", "target_portal") or "").endswith(":3260"))
    if name == "FLOATING_IP_CREATED":
        return s("floating_ip", "state") == "DOWN" and bool(s("floating_ip", "address"))
    if name == "FLOATING_IP_ADDED":
        return (s("floating_ip", "state") == "ACTIVE" and s("floating_ip", "instance_id") == s("instance", "id")
                and s("floating_ip", "address") in (s("instance", "floating_ips") or []))
    if name == "SSH":
        return g["probe"] == "reachable"
    raise KeyError(name)


# -- reachability -------------------------------------------------------------

def oracle_reachable(instance, ports, floating_ips, rules):
    """The four conditions, each evaluated as a set membership question."""
    if instance is None:
        return False
    iid = instance.get("id")
    c1 = instance.get("state") == "ACTIVE"
    c2 = iid in {p.get("device_id") for p in ports if p.get("state") == "ACTIVE"}
    listed = set(instance.get("floating_ips", []))
    c3 = bool(listed & {f.get("address") for f in floating_ips
                        if f.get("state") == "ACTIVE" and f.get("instance_id") == iid})

    def admits(r):
        lo = r.get("port_min")
        hi = r.get("port_max")
        in_range = (lo is None or lo <= 22) and (hi is None or 22 <= hi)
        return (r.get("direction") == "ingress" and r.get("protocol") in {"tcp", "any"}
                and in_range and r.get("remote_cidr") == "0.0.0.0/0")

    c4 = any(admits(r) for r in rules)
    return c1 and c2 and c3 and c4
