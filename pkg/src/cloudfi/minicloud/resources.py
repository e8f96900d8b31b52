import copy
from dataclasses import dataclass, field


@dataclass
class Resource:
    id: str
    kind: str
    name: str
    state: str
    owner_round: str | None = None
    attributes: dict = field(default_factory=dict)

    def view(self):
        data = {"id": self.id, "kind": self.kind, "name": self.name, "state": self.state, "owner_round": self.owner_round}
        data.update(copy.deepcopy(self.attributes))
        return data

    def to_record(self):
        return {
            "id": self.id,
            "kind": self.kind,
            "name": self.name,
            "state": self.state,
            "owner_round": self.owner_round,
            "attributes": copy.deepcopy(self.attributes),
        }

    @classmethod
    def from_record(cls, rec):
        return cls(rec["id"], rec["kind"], rec["name"], rec["state"], rec.get("owner_round"), copy.deepcopy(rec["attributes"]))
