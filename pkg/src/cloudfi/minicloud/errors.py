"""Error taxonomy shared by every minicloud service.

Internal code raises subclasses of :class:`MiniCloudError`; the API layer in
:mod:`cloud` converts anything escaping a handler into :class:`ApiError`.
"""


class MiniCloudError(Exception):
    code = "server-error"
    status = 500

    def __init__(self, message=""):
        super().__init__(message or self.__class__.__name__)


class BadRequest(MiniCloudError):
    code = "bad-request"
    status = 400


class NotFound(MiniCloudError):
    code = "not-found"
    status = 404


class Conflict(MiniCloudError):
    code = "conflict"
    status = 409


class InvalidState(MiniCloudError):
    code = "invalid-state"
    status = 409


class ImageNotFound(NotFound):
    pass


class KeypairNotFound(NotFound):
    pass


class InstanceNotFound(NotFound):
    pass


class HostNotFound(NotFound):
    pass


class FlavorNotFound(NotFound):
    pass


class VolumeNotFound(NotFound):
    pass


class BackendNotFound(NotFound):
    pass


class NetworkNotFound(NotFound):
    pass


class SubnetNotFound(NotFound):
    pass


class RouterNotFound(NotFound):
    pass


class PortNotFound(NotFound):
    pass


class SecurityGroupNotFound(NotFound):
    pass


class FloatingIpNotFound(NotFound):
    pass


class PoolNotFound(NotFound):
    pass


class NoValidHost(MiniCloudError):
    code = "no-valid-host"


class BackendFull(MiniCloudError):
    code = "backend-full"


class AddressExhausted(MiniCloudError):
    code = "address-exhausted"


class MessagingError(MiniCloudError):
    code = "messaging-error"


class DatastoreError(MiniCloudError):
    code = "datastore-error"


class IllegalTransition(DatastoreError):
    code = "illegal-transition"


class CorruptSnapshot(DatastoreError):
    code = "corrupt-snapshot"


class ApiError(Exception):
    """Error returned to an API client."""

    def __init__(self, code, status, message, subsystem, endpoint):
        super().__init__(f"{endpoint}: {status} {code}: {message}")
        self.code = code
        self.status = status
        self.message = message
        self.subsystem = subsystem
        self.endpoint = endpoint

    def to_dict(self):
        return {
            "code": self.code,
            "status": self.status,
            "message": self.message,
            "subsystem": self.subsystem,
            "endpoint": self.endpoint,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(data["code"], data["status"], data["message"], data["subsystem"], data["endpoint"])
