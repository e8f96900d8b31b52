TOPIC = "volume"


class VolumeRPC:
    def __init__(self, bus):
        self.bus = bus

    def create_volume_on_backend(self, volume_id, delay=0.5):
        self.bus.cast(TOPIC, "create_volume_on_backend", delay=delay, volume_id=volume_id)

    def initialize_connection(self, volume_id, connector):
        return self.bus.call(TOPIC, "initialize_connection", volume_id=volume_id, connector=connector)
