"""Start and stop a target host subprocess."""

import os
import selectors
import subprocess
import sys
import time

from .rpc import RpcClient, TransportError
from .sandbox import SandboxPaths


class HostStartError(Exception):
    pass


class HostProcess:
    def __init__(self, paths, clock="sim", startup_timeout=20.0, request_timeout=30.0):
        self.paths = paths if isinstance(paths, SandboxPaths) else SandboxPaths(paths)
        self.clock = clock
        self.startup_timeout = startup_timeout
        self.request_timeout = request_timeout
        self.proc = None
        self.client = None

    def start(self):
        os.makedirs(self.paths.root, exist_ok=True)
        env = dict(os.environ, PYTHONDONTWRITEBYTECODE="1")
        cmd = [sys.executable, "-m", "cloudfi.testbed.host", "--target", self.paths.target, "--workdir", self.paths.root, "--clock", self.clock]
        self._stderr = open(self.paths.stderr, "wb")
        self.proc = subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=self._stderr, env=env)
        line = self._read_ready()
        if not line.startswith("READY "):
            self.kill()
            raise HostStartError(f"host failed to start: {self.stderr_tail()}")
        self.client = RpcClient(int(line.split()[1]), timeout=self.request_timeout)
        return self

    def _read_ready(self):
        sel = selectors.DefaultSelector()
        sel.register(self.proc.stdout, selectors.EVENT_READ)
        deadline = time.monotonic() + self.startup_timeout
        try:
            while time.monotonic() < deadline:
                if sel.select(timeout=max(0.0, deadline - time.monotonic())):
                    return self.proc.stdout.readline().decode().strip()
                if self.proc.poll() is not None:
                    return ""
        finally:
            sel.close()
        return ""

    def stderr_tail(self, n=800):
        try:
            with open(self.paths.stderr, "rb") as fh:
                return fh.read()[-n:].decode(errors="replace").strip()
        except OSError:
            return ""

    def request(self, endpoint, params=None, context=None):
        return self.client.request(endpoint, params, context)

    def stop(self, timeout=5.0):
        if self.proc is None:
            return
        if self.client is not None and self.proc.poll() is None:
            try:
                self.client.request("admin.shutdown")
            except TransportError:
                pass
            self.client.close()
        try:
            self.proc.wait(timeout=timeout)
        except subprocess.TimeoutExpired:
            self.kill()
        self._cleanup()

    def kill(self):
        if self.proc is not None and self.proc.poll() is None:
            self.proc.kill()
            self.proc.wait()
        self._cleanup()

    def _cleanup(self):
        if self.client is not None:
            self.client.close()
        if self.proc is not None and self.proc.stdout:
            self.proc.stdout.close()
        if getattr(self, "_stderr", None):
            self._stderr.close()
            self._stderr = None

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()
