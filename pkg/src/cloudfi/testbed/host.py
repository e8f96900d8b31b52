"""Target host process: serves one minicloud deployment over loopback RPC.

Run as ``python -m cloudfi.testbed.host --target DIR --workdir DIR``.  The
directory ``DIR`` must contain a ``minicloud`` package (pristine, mutated
or coverage-instrumented).  The chosen port is printed as ``READY <port>``.
"""

import argparse
import importlib
import os
import sys

from cloudfi.mutation import runtime

from .rpc import RpcServer
from .sandbox import SandboxPaths


def make_dispatch(cloud, api_error, server_ref):
    def dispatch(request):
        endpoint = request.get("endpoint") or ""
        try:
            if endpoint == "admin.shutdown":
                server_ref[0].stopping = True
                result = None
            else:
                result = cloud.dispatch(endpoint, request.get("params") or {}, request.get("context") or {})
            response = {"ok": True, "result": result}
        except api_error as exc:
            response = {"ok": False, "error": exc.to_dict()}
        except Exception as exc:  # admin misuse, bad params
            response = {"ok": False, "error": {"code": "server-error", "status": 500, "message": f"{type(exc).__name__}: {exc}", "subsystem": "admin", "endpoint": endpoint}}
        response["now"] = cloud.now()
        response["triggers"] = [list(t) for t in runtime.drain_triggers()]
        return response

    return dispatch


def main(argv=None):
    parser = argparse.ArgumentParser(prog="cloudfi.testbed.host")
    parser.add_argument("--target", required=True)
    parser.add_argument("--workdir", required=True)
    parser.add_argument("--clock", choices=("sim", "wall"), default="sim")
    args = parser.parse_args(argv)

    paths = SandboxPaths(args.workdir)
    sys.path.insert(0, os.path.abspath(args.target))
    minicloud = importlib.import_module("minicloud")
    clock = minicloud.SimClock() if args.clock == "sim" else minicloud.WallClock()
    runtime.configure(control=paths.control, trigger_log=paths.trigger_log, coverage=paths.coverage, clock=clock.now)
    cloud = minicloud.Cloud(state_dir=paths.state, log_dir=paths.logs, clock=clock)

    server_ref = [None]
    server = RpcServer(make_dispatch(cloud, minicloud.ApiError, server_ref))
    server_ref[0] = server
    print(f"READY {server.port}", flush=True)
    try:
        while not server.stopping:
            server.handle_request()
    finally:
        server.server_close()
        cloud.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
