"""Target hosting: sandbox layout, host subprocess and RPC transport."""

from .process import HostProcess, HostStartError
from .rpc import RpcClient, RpcServer, TransportError
from .sandbox import SandboxPaths

__all__ = ["HostProcess", "HostStartError", "RpcClient", "RpcServer", "SandboxPaths", "TransportError"]
