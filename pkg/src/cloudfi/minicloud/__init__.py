"""minicloud: a small IaaS control plane with compute, volume and network services.

It is the fault-injection target shipped with cloudfi.  Every module uses
relative imports only, so a copied tree can be imported as a top-level
``minicloud`` package from any sandbox directory.

Code map of the spots where a fault tends to leave the deployment damaged
rather than failing cleanly:

* ``compute/manager.py`` ``build_instance`` claims a host slot before spawning
  and only handles :class:`MiniCloudError`.  Any other exception, or a
  skipped ``build_finished``, leaks the claim; later boots then fail with
  ``NoValidHost``, which the scheduler reports at WARNING only.
* ``network/ipam.py`` trusts the pool's ``allocated`` list.  If that list is
  lost, a later allocation hands out an address that is still in use.
* Several DB helpers have defaults that differ from what the API passes:
  attachment ``attach_mode`` (``ro`` vs ``rw``), export port (3261 vs 3260)
  and rule ``direction`` (``egress`` vs ``ingress``).  Dropping the argument
  silently yields a resource in the wrong configuration.
* Writes are never read back, so a corrupted attribute is persisted as is.
"""

from . import errors
from .clock import SimClock, WallClock
from .client import Client, StepFailed
from .cloud import ADMIN_ENDPOINTS, CATALOG_VERSION, ENDPOINTS, REQUEST_COST, Cloud, seed
from .errors import ApiError, MiniCloudError
from .logs import ServiceLogRecord, Severity

__all__ = [
    "ADMIN_ENDPOINTS",
    "ApiError",
    "CATALOG_VERSION",
    "Client",
    "Cloud",
    "ENDPOINTS",
    "MiniCloudError",
    "REQUEST_COST",
    "ServiceLogRecord",
    "Severity",
    "StepFailed",
    "SimClock",
    "WallClock",
    "errors",
    "seed",
]
