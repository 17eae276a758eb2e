"""Live mode: wall-clock engine behind a newline-delimited JSON socket.

Clients connect over TCP and speak one JSON object per line. Inbound:

    {"type": "join",  "biker": 1}
    {"type": "leave", "biker": 1}
    {"type": "pedal", "biker": 1}        # one crank revolution, timestamped on arrival

Outbound, broadcast at 20 Hz:

    {"type": "state", "t": 12.3, "mode": "Solo", "overlay": null,
     "leaves": [0.1, 0.2, 0.1], "kinds": ["Motivational", ...],
     "sync": {"status": "Indeterminate", "spread": 0.0},
     "power": {"supply": 48.2, "demand": 7.1, "scale": 1.0, "reservoir": 2.5},
     "bikers": [{"id": 1, "rpm": 61.4}]}

Concurrency: the tick thread owns the engine; reader threads only parse
lines and enqueue immutable messages, which the tick thread applies in
arrival order at tick boundaries. A malformed line gets an error reply and
the connection survives; a dropped client's bikers auto-leave after 3 s
unless another connection claims them first.
"""

from __future__ import annotations

import json
import queue
import socket
import threading
import time

from .config import EngineConfig
from .engine import Engine
from .scenario import JOIN, LEAVE, PEDAL, ScenarioEvent

SNAPSHOT_HZ = 20
AUTO_LEAVE_S = 3.0
_SEND_TIMEOUT_S = 0.5
_MIN_PULSE_GAP_S = 1e-6


class _Client:
    def __init__(self, sock: socket.socket, client_id: int) -> None:
        self.sock = sock
        self.client_id = client_id
        self.lock = threading.Lock()
        self.alive = True

    def send_line(self, line: bytes) -> bool:
        with self.lock:
            if not self.alive:
                return False
            try:
                self.sock.sendall(line)
                return True
            except OSError:
                self.alive = False
                return False

    def close(self) -> None:
        with self.lock:
            self.alive = False
            try:
                self.sock.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
            try:
                self.sock.close()
            except OSError:
                pass


class LiveServer:
    """Runs the engine in real time and broadcasts state snapshots."""

    def __init__(self, config: EngineConfig, host: str = "127.0.0.1",
                 port: int = 7077) -> None:
        self.config = config
        self.host = host
        self.port = port
        self.snapshot_hz = SNAPSHOT_HZ
        self._engine = Engine(config)
        self._inbox: queue.Queue[tuple[float, _Client | None, dict | str]] = queue.Queue()
        self._clients: dict[int, _Client] = {}
        self._clients_lock = threading.Lock()
        self._owners: dict[int, int] = {}          # biker id -> client id
        self._auto_leave: dict[int, float] = {}    # biker id -> engine-time deadline
        self._last_pulse: dict[int, float] = {}
        self._listener: socket.socket | None = None
        self._accept_thread: threading.Thread | None = None
        self._stop = threading.Event()
        self._next_client_id = 0
        self._t0 = 0.0

    # -- lifecycle -------------------------------------------------------

    def start(self) -> None:
        self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._listener.bind((self.host, self.port))
        self.port = self._listener.getsockname()[1]
        self._listener.listen(8)
        self._listener.settimeout(0.5)
        self._accept_thread = threading.Thread(target=self._accept_loop,
                                               name="pedaltree-accept", daemon=True)
        self._accept_thread.start()

    def shutdown(self) -> None:
        self._stop.set()
        if self._listener is not None:
            try:
                self._listener.close()
            except OSError:
                pass
        with self._clients_lock:
            clients = list(self._clients.values())
        for client in clients:
            client.close()

    def run_forever(self) -> None:
        """Tick the engine at wall-clock pace until shutdown."""
        dt = self.config.dt_s
        self._t0 = time.monotonic()
        next_tick = self._t0
        next_snapshot = self._t0
        while not self._stop.is_set():
            now_wall = time.monotonic()
            if now_wall < next_tick:
                time.sleep(min(next_tick - now_wall, 0.01))
                continue
            self._drain_inbox()
            self._apply_auto_leaves()
            record_time = self._engine.now_s
            self._engine.tick()
            next_tick += dt
            if now_wall >= next_snapshot:
                self._broadcast(record_time)
                next_snapshot += 1.0 / SNAPSHOT_HZ

    # -- client handling ---------------------------------------------------

    def _accept_loop(self) -> None:
        assert self._listener is not None
        while not self._stop.is_set():
            try:
                sock, _ = self._listener.accept()
            except TimeoutError:
                continue
            except OSError:
                break
            sock.settimeout(_SEND_TIMEOUT_S)
            with self._clients_lock:
                client = _Client(sock, self._next_client_id)
                self._clients[client.client_id] = client
                self._next_client_id += 1
            threading.Thread(target=self._reader_loop, args=(client,),
                             name=f"pedaltree-client-{client.client_id}",
                             daemon=True).start()

    def _reader_loop(self, client: _Client) -> None:
        buffer = b""
        sock = client.sock
        sock.settimeout(None)
        try:
            while not self._stop.is_set():
                chunk = sock.recv(4096)
                if not chunk:
                    break
                buffer += chunk
                while b"\n" in buffer:
                    line, buffer = buffer.split(b"\n", 1)
                    if line.strip():
                        self._handle_line(client, line)
        except OSError:
            pass
        finally:
            self._inbox.put((time.monotonic(), client, "disconnect"))
            client.close()
            with self._clients_lock:
                self._clients.pop(client.client_id, None)

    def _handle_line(self, client: _Client, line: bytes) -> None:
        try:
            message = json.loads(line)
            if not isinstance(message, dict):
                raise ValueError("message must be a JSON object")
            kind = message.get("type")
            if kind not in (JOIN, LEAVE, PEDAL):
                raise ValueError(f"unknown message type {kind!r}")
            biker = message["biker"]
            if not isinstance(biker, int):
                raise ValueError("biker must be an integer")
        except (ValueError, KeyError) as exc:
            reply = json.dumps({"type": "error", "message": str(exc)})
            client.send_line(reply.encode() + b"\n")
            return
        self._inbox.put((time.monotonic(), client, message))

    # -- tick-thread internals ----------------------------------------------

    def _drain_inbox(self) -> None:
        now = self._engine.now_s
        while True:
            try:
                arrival, client, message = self._inbox.get_nowait()
            except queue.Empty:
                return
            if message == "disconnect":
                assert client is not None
                for biker, owner in self._owners.items():
                    if owner == client.client_id:
                        self._auto_leave[biker] = now + AUTO_LEAVE_S
                continue
            assert isinstance(message, dict) and client is not None
            biker = message["biker"]
            kind = message["type"]
            try:
                if kind == JOIN:
                    # rejoin after a drop keeps the pulse history (tracker
                    # join is idempotent); ownership moves to this client
                    self._engine.ingest(ScenarioEvent(now, JOIN, biker))
                    self._owners[biker] = client.client_id
                    self._auto_leave.pop(biker, None)
                elif kind == LEAVE:
                    if biker not in self._owners:
                        raise ValueError(f"biker {biker} is not joined")
                    self._engine.ingest(ScenarioEvent(now, LEAVE, biker))
                    self._owners.pop(biker, None)
                    self._auto_leave.pop(biker, None)
                    self._last_pulse.pop(biker, None)
                else:
                    timestamp = min(arrival - self._t0, now)
                    floor = self._last_pulse.get(biker)
                    if floor is not None and timestamp <= floor:
                        timestamp = floor + _MIN_PULSE_GAP_S
                    self._engine.ingest(ScenarioEvent(timestamp, PEDAL, biker))
                    self._last_pulse[biker] = timestamp
            except ValueError as exc:
                client.send_line(
                    json.dumps({"type": "error", "message": str(exc)}).encode() + b"\n")

    def _apply_auto_leaves(self) -> None:
        now = self._engine.now_s
        expired = [b for b, deadline in self._auto_leave.items() if deadline <= now]
        for biker in expired:
            self._engine.ingest(ScenarioEvent(now, LEAVE, biker))
            self._auto_leave.pop(biker, None)
            self._owners.pop(biker, None)
            self._last_pulse.pop(biker, None)

    def _broadcast(self, now_s: float) -> None:
        engine = self._engine
        assignment = engine.assignment
        snapshot = {
            "type": "state",
            "t": now_s,
            "mode": engine.mode.base.value,
            "overlay": engine.mode.overlay.kind.value if engine.mode.overlay else None,
            "leaves": [s.deflection_frac for s in engine.leaf_states],
            "kinds": [l.kind.value for l in assignment.leaves] if assignment else [],
            "sync": {
                "status": engine.sync_state.status.value,
                "spread": engine.sync_state.spread_frac,
            },
            "power": {
                "supply": engine.ledger.supply_w,
                "demand": engine.ledger.demand_w,
                "scale": engine.ledger.brownout_scale,
                "reservoir": engine.ledger.reservoir_wh,
            },
            "bikers": [{"id": e.biker_id, "rpm": e.rpm}
                       for e in engine.snapshot_bikers(now_s)],
        }
        line = json.dumps(snapshot, separators=(",", ":")).encode() + b"\n"
        with self._clients_lock:
            clients = list(self._clients.values())
        for client in clients:
            client.send_line(line)
