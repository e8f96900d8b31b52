import itertools
import json
import random

import pytest
from conftest import by_name, find_point, run_seeded
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import oracle_reachable

from cloudfi.analyzer import FailureClass, classify_failure
from cloudfi.minicloud import ApiError, Client, Cloud, StepFailed, errors
from cloudfi.minicloud.datastore import Datastore
from cloudfi.minicloud.lifecycle import LIFECYCLES, is_legal_transition
from cloudfi.minicloud.logs import ServiceLogRecord, Severity, format_line, parse_line
from cloudfi.minicloud.network.connectivity import is_reachable
from cloudfi.orchestrator import COMPLETED


@pytest.fixture
def cloud():
    c = Cloud()
    yield c
    c.close()


def provision(cloud, prefix="app", with_fip=True):
    cl = Client(cloud)
    ids = {"image": cl.register_image(f"{prefix}-img")}
    ids.update(cl.create_access_artifacts(prefix))
    ids.update(cl.provision_network(prefix))
    ids["instance"] = cl.boot_instance(f"{prefix}-vm", ids["image"], ids["keypair"], ids["security_group"], ids["network"])
    ids["volume"] = cl.create_volume(f"{prefix}-vol")
    if with_fip:
        ids["floating_ip"] = cl.allocate_floating_ip(ids["instance"])
    return ids


def get(cloud, kind, rid):
    key = "group_id" if kind == "security_group" else f"{kind}_id"
    return cloud.request(f"{'compute' if kind in ('image', 'instance', 'keypair') else 'volume' if kind == 'volume' else 'network'}.get_{kind}", {key: rid})


# -- nominal and error paths ----------------------------------------------------

def test_nominal_path(cloud):
    ids = provision(cloud)
    assert get(cloud, "image", ids["image"])["state"] == "ACTIVE"
    inst = get(cloud, "instance", ids["instance"])
    assert inst["state"] == "ACTIVE" and len(inst["port_ids"]) == 1
    assert get(cloud, "network", ids["network"])["state"] == "ACTIVE"
    assert get(cloud, "router", ids["router"])["state"] == "ACTIVE"
    assert get(cloud, "volume", ids["volume"])["state"] == "AVAILABLE"
    Client(cloud).attach_volume(ids["instance"], ids["volume"])
    assert get(cloud, "volume", ids["volume"])["state"] == "IN_USE"
    fip = get(cloud, "floating_ip", ids["floating_ip"])
    assert fip["state"] == "ACTIVE" and fip["instance_id"] == ids["instance"]
    assert Client(cloud).probe_connectivity(ids["instance"]) == "reachable"


def test_duplicate_image_is_conflict(cloud):
    Client(cloud).register_image("img")
    with pytest.raises(ApiError) as info:
        Client(cloud).register_image("img")
    assert info.value.status == 409 and info.value.subsystem == "compute"


def test_duplicate_keypair_fails_first_step(cloud):
    Client(cloud).create_access_artifacts("dup")
    with pytest.raises(StepFailed) as info:
        Client(cloud).create_access_artifacts("dup")
    assert info.value.step == "keypair" and info.value.error.status == 409


def test_boot_on_unknown_network_is_bad_request(cloud):
    ids = provision(cloud, with_fip=False)
    with pytest.raises(ApiError) as info:
        cloud.request("compute.boot_instance", {"name": "x", "image_id": ids["image"], "keypair_id": ids["keypair"],
                                                "security_group_id": ids["security_group"], "network_id": "net-9999"})
    assert info.value.status == 400


def test_attach_to_building_instance_fails(cloud):
    ids = provision(cloud, with_fip=False)
    vm = cloud.request("compute.boot_instance", {"name": "late", "image_id": ids["image"], "keypair_id": ids["keypair"],
                                                 "security_group_id": ids["security_group"], "network_id": ids["network"]})
    assert get(cloud, "instance", vm)["state"] == "BUILDING"
    with pytest.raises(ApiError) as info:
        Client(cloud).attach_volume(vm, ids["volume"])
    assert info.value.subsystem == "volume"


def test_floating_ip_needs_active_instance(cloud):
    ids = provision(cloud, with_fip=False)
    vm = cloud.request("compute.boot_instance", {"name": "late", "image_id": ids["image"], "keypair_id": ids["keypair"],
                                                 "security_group_id": ids["security_group"], "network_id": ids["network"]})
    with pytest.raises(StepFailed) as info:
        Client(cloud).allocate_floating_ip(vm)
    assert info.value.step == "association"
    assert "floating_ip" in info.value.done


def test_network_step_failures_are_named(cloud):
    cl = Client(cloud)
    done = cl.provision_network("n1", cidr="10.5.0.0/24")
    with pytest.raises(StepFailed) as info:
        cl._steps([("router_interface", "network.add_router_interface",
                    lambda d: {"router_id": "rtr-9999", "subnet_id": done["subnet"]})], done)
    assert info.value.step == "router_interface"
    with pytest.raises(StepFailed) as info:
        cl.provision_network("n2", cidr="not-a-cidr")
    assert info.value.step == "subnet" and set(info.value.done) == {"network"}


def test_malformed_request_is_bad_request(cloud):
    with pytest.raises(ApiError) as info:
        cloud.request("compute.register_image", {"nmae": "x"})
    assert info.value.status == 400


def test_unknown_endpoint(cloud):
    with pytest.raises(ApiError) as info:
        cloud.request("compute.reboot", {})
    assert info.value.status == 404


def test_missing_floating_ip_means_unreachable(cloud):
    ids = provision(cloud, with_fip=False)
    assert Client(cloud).probe_connectivity(ids["instance"]) == "unreachable"


# -- reachability predicate -----------------------------------------------------

def _random_graph(rng):
    iid = "i-1"
    instance = None if rng.random() < 0.05 else {
        "id": iid, "state": rng.choice(["ACTIVE", "ACTIVE", "BUILDING", "ERROR"]),
        "floating_ips": rng.sample(["1.1.1.1", "2.2.2.2"], rng.randint(0, 2)),
    }
    ports = [{"state": rng.choice(["ACTIVE", "DOWN"]), "device_id": rng.choice([iid, "i-2"])} for _ in range(rng.randint(0, 2))]
    fips = [{"state": rng.choice(["ACTIVE", "DOWN"]), "instance_id": rng.choice([iid, None]),
             "address": rng.choice(["1.1.1.1", "2.2.2.2", "3.3.3.3"])} for _ in range(rng.randint(0, 2))]
    rules = [{"direction": rng.choice(["ingress", "egress"]), "protocol": rng.choice(["tcp", "udp", "any"]),
              "port_min": rng.choice([None, 1, 22, 23]), "port_max": rng.choice([None, 21, 22, 80]),
              "remote_cidr": rng.choice(["0.0.0.0/0", "10.0.0.0/8"])} for _ in range(rng.randint(0, 3))]
    return instance, ports, fips, rules


def test_reachability_matches_predicate_oracle():
    rng = random.Random(11)
    outcomes = set()
    for _ in range(3000):
        graph = _random_graph(rng)
        expected = oracle_reachable(*graph)
        assert is_reachable(*graph) == expected, graph
        outcomes.add(expected)
    assert outcomes == {True, False}


# -- admin snapshot / reset -----------------------------------------------------

def test_reset_restores_snapshot(cloud):
    snap = cloud.snapshot()
    digest = cloud.digest()
    provision(cloud)
    assert cloud.digest() != digest
    cloud.reset(snap)
    assert cloud.digest() == digest
    cloud.reset(snap)
    assert cloud.digest() == digest


def test_reset_clears_poisoned_cache(cloud):
    snap = cloud.snapshot()
    compute = cloud.services["compute"]
    compute._flavor_cache["m1.small"] = "poison"
    cloud.reset(snap)
    assert cloud.services["compute"]._flavor_cache == {}
    ids = provision(cloud)  # would fail on the poisoned entry
    assert get(cloud, "instance", ids["instance"])["flavor"] == "m1.small"


def test_corrupt_snapshot_leaves_state_untouched(cloud):
    provision(cloud)
    digest = cloud.digest()
    blob = bytearray(cloud.snapshot())
    blob[len(blob) // 2] ^= 0x55
    for bad in (bytes(blob), b"not json", b'{"format": "other"}'):
        with pytest.raises(errors.CorruptSnapshot):
            cloud.reset(bad)
        assert cloud.digest() == digest


def test_kv_sentinel(cloud):
    assert cloud.kv_get("marker") is None
    cloud.kv_put("marker", "x")
    cloud.kv_put("marker", "y")
    assert cloud.kv_get("marker") == "y"


# -- persistence and lifecycles -------------------------------------------------

def test_datastore_survives_restart(tmp_path):
    c = Cloud(state_dir=str(tmp_path / "state"))
    ids = provision(c)
    digest = c.digest()
    c.close()
    again = Cloud(state_dir=str(tmp_path / "state"))
    try:
        assert again.digest() == digest
        assert get(again, "instance", ids["instance"])["state"] == "ACTIVE"
    finally:
        again.close()


def test_restart_services_keeps_datastore(cloud):
    ids = provision(cloud)
    digest = cloud.digest()
    cloud.restart_services()
    assert cloud.digest() == digest
    assert get(cloud, "volume", ids["volume"])["state"] == "AVAILABLE"


STATES = sorted({s for init, trans in LIFECYCLES.values() for s in init | {x for t in trans for x in t}})


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(sorted(LIFECYCLES)), st.lists(st.sampled_from(STATES), max_size=8))
def test_only_declared_transitions_are_stored(kind, moves):
    store = Datastore()
    start = sorted(LIFECYCLES[kind][0])[0]
    rec = store.create(kind, "r", start, {})
    current = start
    for new in moves:
        try:
            store.update(kind, rec.id, state=new)
        except errors.IllegalTransition:
            assert not is_legal_transition(kind, current, new)
            continue
        assert is_legal_transition(kind, current, new)
        current = new
        assert store.get(kind, rec.id).state == current


def test_illegal_initial_state_rejected():
    with pytest.raises(errors.IllegalTransition):
        Datastore().create("image", "x", "ACTIVE", {})


timestamps = st.integers(min_value=0, max_value=10**11).map(lambda us: us / 1e6)


@given(timestamps, st.sampled_from(list(Severity)), st.from_regex(r"[a-z][a-z\-]{0,12}", fullmatch=True),
       st.text(alphabet=st.characters(blacklist_categories=("Cs", "Cc")), max_size=40))
def test_log_line_roundtrip(ts, sev, component, message):
    rec = ServiceLogRecord(ts, sev, component, message)
    back = parse_line(format_line(rec))
    assert back == rec


# -- seeded faults, run through the real experiment driver -------------------------

def _seeded(minicloud_points, campaign_config, pristine_snapshot, tmp_path, *spec, line=None):
    point = find_point(minicloud_points, *spec, line=line)
    record, tables = run_seeded(point, campaign_config, pristine_snapshot, tmp_path / "sb")
    assert record.status == COMPLETED, record.reason
    assert record.trace_faulty.triggers()
    return point, record, tables


def _failed(trace):
    return [e for e in trace.events if e.failed]


def test_seeded_missing_image_activation(minicloud_points, campaign_config, pristine_snapshot, tmp_path):
    _, record, tables = _seeded(minicloud_points, campaign_config, pristine_snapshot, tmp_path,
                                "compute/api.py", "activate_image", "MISSING_FUNC_CALL")
    assert classify_failure(record.trace_faulty) is FailureClass.ASSERTION_ONLY
    assert not record.trace_faulty.api_outcomes() or all(e.ok for e in record.trace_faulty.api_outcomes())
    assert [e.name for e in _failed(record.trace_faulty)] == ["IMAGE_ACTIVE"]
    assert by_name(tables, "image", "fi-faulty-image")["state"] == "QUEUED"


def test_seeded_wrong_return_in_compute_update_surfaces_in_volume(minicloud_points, campaign_config, pristine_snapshot, tmp_path):
    point, record, tables = _seeded(minicloud_points, campaign_config, pristine_snapshot, tmp_path,
                                    "compute/manager.py", "instance_update", "WRONG_RETURN_VALUE", 0)
    errs = [e for e in record.trace_faulty.api_outcomes() if not e.ok]
    assert errs and errs[0].api_name == "volume.attach_volume" and errs[0].subsystem == "volume"
    assert point.subsystem == "compute"
    assert by_name(tables, "instance", "fi-faulty-vm")["state"] != "ACTIVE"


def test_seeded_missing_param_in_subnet_creation(minicloud_points, campaign_config, pristine_snapshot, tmp_path):
    _, record, tables = _seeded(minicloud_points, campaign_config, pristine_snapshot, tmp_path,
                                "network/api.py", "subnet_create", "MISSING_PARAM", 4)
    errs = [e for e in record.trace_faulty.api_outcomes() if not e.ok]
    assert [e.api_name for e in errs] == ["network.create_subnet"]
    assert by_name(tables, "network", "fi-faulty-net")["state"] == "ACTIVE"
    assert not tables["subnet"]


def test_seeded_association_fault_seen_only_by_assertion(minicloud_points, campaign_config, pristine_snapshot, tmp_path):
    _, record, tables = _seeded(minicloud_points, campaign_config, pristine_snapshot, tmp_path,
                                "network/api.py", "floating_ip_update", "MISSING_FUNC_CALL")
    assert classify_failure(record.trace_faulty) is FailureClass.ASSERTION_ONLY
    assert "FLOATING_IP_ADDED" in [e.name for e in _failed(record.trace_faulty)]
    fips = list(tables["floating_ip"].values())
    assert len(fips) == 1 and fips[0]["state"] == "DOWN"
    assert fips[0]["attributes"].get("instance_id") is None


def test_seeded_rule_corruption_fails_security_group_check(minicloud_points, campaign_config, pristine_snapshot, tmp_path):
    _, record, _ = _seeded(minicloud_points, campaign_config, pristine_snapshot, tmp_path,
                           "network/api.py", "security_group_rule_create", "WRONG_PARAM_VALUE", 3)
    assert classify_failure(record.trace_faulty) is FailureClass.ASSERTION_ONLY
    assert "SECURITY_GROUP" in [e.name for e in _failed(record.trace_faulty)]
