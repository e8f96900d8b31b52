"""JSON-lines request/response transport over loopback TCP.

Request:  ``{"id": n, "endpoint": str, "params": {...}, "context": {...}}``
Response: ``{"id": n, "ok": bool, "result" | "error": ..., "now": float, "triggers": [[id, ts], ...]}``
"""

import json
import socket
import socketserver


class TransportError(Exception):
    pass


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        for line in self.rfile:
            if not line.strip():
                continue
            try:
                request = json.loads(line)
            except ValueError:
                response = {"id": None, "ok": False, "error": {"code": "bad-request", "status": 400, "message": "malformed request", "subsystem": "rpc", "endpoint": None}}
            else:
                response = self.server.dispatch(request)
                response["id"] = request.get("id")
            self.wfile.write(json.dumps(response, sort_keys=True).encode() + b"\n")
            self.wfile.flush()
            if self.server.stopping:
                return


class RpcServer(socketserver.TCPServer):
    allow_reuse_address = True

    def __init__(self, dispatch, host="127.0.0.1", port=0):
        super().__init__((host, port), _Handler)
        self.dispatch = dispatch
        self.stopping = False

    @property
    def port(self):
        return self.server_address[1]


class RpcClient:
    def __init__(self, port, host="127.0.0.1", timeout=30.0):
        self.address = (host, port)
        self.timeout = timeout
        self._sock = None
        self._fh = None
        self._next = 0

    def _connect(self):
        try:
            self._sock = socket.create_connection(self.address, timeout=self.timeout)
        except OSError as exc:
            raise TransportError(f"cannot connect to {self.address}: {exc}") from None
        self._fh = self._sock.makefile("rwb")

    def request(self, endpoint, params=None, context=None):
        if self._sock is None:
            self._connect()
        self._next += 1
        msg = {"id": self._next, "endpoint": endpoint, "params": params or {}, "context": context or {}}
        try:
            self._fh.write(json.dumps(msg, sort_keys=True).encode() + b"\n")
            self._fh.flush()
            line = self._fh.readline()
        except (OSError, ValueError) as exc:
            self.close()
            raise TransportError(f"{endpoint}: {exc}") from None
        if not line:
            self.close()
            raise TransportError(f"{endpoint}: connection closed by target")
        try:
            response = json.loads(line)
        except ValueError:
            self.close()
            raise TransportError(f"{endpoint}: malformed response") from None
        if response.get("id") != self._next:
            self.close()
            raise TransportError(f"{endpoint}: response id mismatch")
        return response

    def close(self):
        for obj in (self._fh, self._sock):
            if obj is not None:
                try:
                    obj.close()
                except OSError:
                    pass
        self._fh = self._sock = None
