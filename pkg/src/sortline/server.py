"""Line-protocol TCP server for driving environments from other processes.

Each connection is an isolated session holding at most one environment.
Messages are JSON objects, one per line, and every request gets exactly one
response.

Requests:
    {"type": "hello"}
    {"type": "reset", "seed": 42, "config": {"obs_noise_level": 0.3}}
    {"type": "step", "action": {"speed": 5, "mode": "positive"}}
    {"type": "close"}

``seed`` and ``config`` are optional on reset; config keys mirror the
EnvConfig fields.  ``mode`` is required exactly when the variant is advanced.

Responses:
    {"type": "spec", ...}    for hello: variant, action space, observation
                             fields, episode length
    {"type": "state", ...}   for reset/step: observation, reward (null on
                             reset), done flag, info record
    {"type": "error", "code": ..., "message": ...}
    {"type": "bye"}          acknowledges close; the server then drops the
                             connection

Error codes: BAD_REQUEST (malformed line or unknown type), BAD_CONFIG,
BAD_ACTION, NO_EPISODE (step before any reset), EPISODE_DONE.  Errors leave
the session usable.
"""

from __future__ import annotations

import json
import signal
import socket
import socketserver
import threading
from typing import Any

from .config import ConfigError, EnvConfig, config_from_mapping
from .env import EpisodeDoneError, SortingLineEnv
from .types import MODE_ORDER, Action, EnvVariant, Observation, SortingMode, SPEED_INDICES

PROTOCOL_VERSION = 1


def _spec_payload(config: EnvConfig) -> dict[str, Any]:
    advanced = config.variant is EnvVariant.ADVANCED
    return {
        "type": "spec",
        "protocol": PROTOCOL_VERSION,
        "variant": config.variant.value,
        "action_count": 10 * (3 if advanced else 1),
        "speeds": list(SPEED_INDICES),
        "modes": [m.value for m in MODE_ORDER] if advanced else None,
        "observation_fields": ["input_total", "ratio_category"] if advanced else ["input_total"],
        "episode_length": config.episode_length,
    }


def _obs_payload(obs: Observation) -> dict[str, Any]:
    payload: dict[str, Any] = {"input_total": obs.input_total}
    if obs.ratio_category is not None:
        payload["ratio_category"] = obs.ratio_category.value
    return payload


def _error(code: str, message: str) -> dict[str, Any]:
    return {"type": "error", "code": code, "message": message}


def _action_from_payload(payload: Any) -> Action:
    if not isinstance(payload, dict) or "speed" not in payload:
        raise ValueError("action must be an object with a 'speed' key")
    speed = payload["speed"]
    if not isinstance(speed, int) or isinstance(speed, bool):
        raise ValueError(f"speed must be an integer, got {speed!r}")
    mode = payload.get("mode")
    return Action(speed, SortingMode.from_name(mode) if mode is not None else None)


class Session:
    """Protocol state machine for one connection; socket-free for testability."""

    def __init__(self, base_config: EnvConfig):
        self.base_config = base_config
        self.config = base_config
        self.env: SortingLineEnv | None = None

    def handle(self, request: Any) -> tuple[dict[str, Any], bool]:
        """Map one decoded request to (response, close-connection flag)."""
        if not isinstance(request, dict) or not isinstance(request.get("type"), str):
            return _error("BAD_REQUEST", "request must be an object with a 'type' field"), False
        kind = request["type"]
        if kind == "hello":
            return _spec_payload(self.config), False
        if kind == "close":
            return {"type": "bye"}, True
        if kind == "reset":
            return self._reset(request), False
        if kind == "step":
            return self._step(request), False
        return _error("BAD_REQUEST", f"unknown request type {kind!r}"), False

    def _reset(self, request: dict[str, Any]) -> dict[str, Any]:
        overrides = request.get("config") or {}
        if not isinstance(overrides, dict):
            return _error("BAD_CONFIG", "config must be an object")
        seed = request.get("seed")
        if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
            return _error("BAD_CONFIG", "seed must be an integer")
        try:
            config = config_from_mapping(overrides, base=self.base_config)
            env = SortingLineEnv(config)
            obs = env.reset(seed=seed)
        except ConfigError as exc:
            return _error("BAD_CONFIG", str(exc))
        self.config = config
        self.env = env
        return {
            "type": "state",
            "observation": _obs_payload(obs),
            "reward": None,
            "done": False,
            "info": {},
        }

    def _step(self, request: dict[str, Any]) -> dict[str, Any]:
        if self.env is None:
            return _error("NO_EPISODE", "reset before stepping")
        try:
            action = _action_from_payload(request.get("action"))
            result = self.env.step(action)
        except EpisodeDoneError as exc:
            return _error("EPISODE_DONE", str(exc))
        except ValueError as exc:
            return _error("BAD_ACTION", str(exc))
        return {
            "type": "state",
            "observation": _obs_payload(result.observation),
            "reward": result.reward,
            "done": result.done,
            "info": result.info,
        }


def _encode(response: dict[str, Any]) -> bytes:
    return (json.dumps(response, sort_keys=True) + "\n").encode("utf-8")


class _SessionHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        session = Session(self.server.base_config)
        for raw in self.rfile:
            line = raw.strip()
            if not line:
                continue
            try:
                request = json.loads(line)
            except json.JSONDecodeError as exc:
                self.wfile.write(_encode(_error("BAD_REQUEST", f"bad JSON: {exc.msg}")))
                continue
            response, close = session.handle(request)
            self.wfile.write(_encode(response))
            if close:
                break


class EnvServer(socketserver.ThreadingTCPServer):
    """Threaded TCP server; pass port 0 to bind an ephemeral port."""

    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address: tuple[str, int], config: EnvConfig):
        self.base_config = config.validate()
        super().__init__(address, _SessionHandler)

    @property
    def port(self) -> int:
        return self.server_address[1]


def serve(config: EnvConfig, host: str = "127.0.0.1", port: int = 5555) -> None:
    """Run a server until SIGINT/SIGTERM, then shut down cleanly."""
    with EnvServer((host, port), config) as server:
        def stop(_signum, _frame):
            threading.Thread(target=server.shutdown).start()

        signal.signal(signal.SIGINT, stop)
        signal.signal(signal.SIGTERM, stop)
        print(f"serving {config.variant.value} environment on {host}:{server.port}")
        server.serve_forever()


class EnvClient:
    """Small blocking client, used by the tests and handy for scripting."""

    def __init__(self, host: str, port: int, timeout: float = 30.0):
        self._sock = socket.create_connection((host, port), timeout=timeout)
        self._file = self._sock.makefile("rwb")

    def request(self, payload: dict[str, Any]) -> dict[str, Any]:
        self._file.write((json.dumps(payload) + "\n").encode("utf-8"))
        self._file.flush()
        line = self._file.readline()
        if not line:
            raise ConnectionError("server closed the connection")
        return json.loads(line)

    def hello(self) -> dict[str, Any]:
        return self.request({"type": "hello"})

    def reset(self, seed: int | None = None, config: dict[str, Any] | None = None) -> dict[str, Any]:
        payload: dict[str, Any] = {"type": "reset"}
        if seed is not None:
            payload["seed"] = seed
        if config:
            payload["config"] = config
        return self.request(payload)

    def step(self, action: Action | dict[str, Any]) -> dict[str, Any]:
        if isinstance(action, Action):
            encoded: dict[str, Any] = {"speed": action.speed_index}
            if action.mode is not None:
                encoded["mode"] = action.mode.value
        else:
            encoded = action
        return self.request({"type": "step", "action": encoded})

    def close(self) -> None:
        try:
            self.request({"type": "close"})
        except (ConnectionError, OSError):
            pass
        finally:
            self._file.close()
            self._sock.close()

    def __enter__(self) -> "EnvClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
