from .. import errors


class Scheduler:
    """Picks a compute host with free capacity and no build in progress."""

    def __init__(self, db, resource_tracker, log):
        self.db = db
        self.resource_tracker = resource_tracker
        self.log = log

    def select_host_for_instance(self, instance):
        wanted = instance.attributes["vcpus"]
        candidates = []
        for host in self.db.host_get_all():
            if host.state != "UP":
                self.log.debug("Host %s is %s, skipping", host.id, host.state)
                continue
            if host.attributes["builds_in_progress"] >= host.attributes["max_concurrent_builds"]:
                self.log.debug("Host %s already has %d builds in progress", host.id, host.attributes["builds_in_progress"])
                continue
            free = self.resource_tracker.free_vcpus_on_host(host)
            if free < wanted:
                self.log.debug("Host %s has %d free vCPUs, %d wanted", host.id, free, wanted)
                continue
            candidates.append((-free, host.id, host))
        if not candidates:
            raise errors.NoValidHost(f"no valid host was found for instance {instance.id}")
        candidates.sort(key=lambda c: (c[0], c[1]))
        return candidates[0][2]
