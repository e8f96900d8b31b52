"""Per-host usage bookkeeping, persisted on the host record.

Claims are released explicitly by the build path; there is no periodic
audit, so a claim that is never released stays on the host record.
"""


class ResourceTracker:
    def __init__(self, db, log):
        self.db = db
        self.log = log

    def free_vcpus_on_host(self, host):
        used = 0
        for instance_id in host.attributes["instance_ids"]:
            instance = self.db.instance_get(instance_id)
            if instance.state == "ERROR":
                continue
            used += instance.attributes["vcpus"]
        return host.attributes["vcpus"] - used

    def instance_claim(self, host, instance):
        current = self.db.host_get(host.id)
        instance_ids = current.attributes["instance_ids"] + [instance.id]
        builds = current.attributes["builds_in_progress"] + 1
        self.db.host_update(host.id, instance_ids=instance_ids, builds_in_progress=builds)
        self.log.debug("Claimed %d vCPUs on %s for %s", instance.attributes["vcpus"], host.id, instance.id)

    def instance_release(self, host, instance_id):
        current = self.db.host_get(host.id)
        instance_ids = [i for i in current.attributes["instance_ids"] if i != instance_id]
        builds = max(0, current.attributes["builds_in_progress"] - 1)
        self.db.host_update(host.id, instance_ids=instance_ids, builds_in_progress=builds)

    def build_finished(self, host):
        current = self.db.host_get(host.id)
        builds = max(0, current.attributes["builds_in_progress"] - 1)
        self.db.host_update(host.id, builds_in_progress=builds)
