"""Live session protocol.

Messages are JSON objects, one per line / websocket frame.  Inbound kinds:

  config     {"kind":"config","mapping":"relative","gain_t":"constant:1",
              "gain_r":"constant:3","ego_t":true,"ego_r":false,"tol":1e-9}
             (all fields optional, partial update; switching config while
             engaged re-engages at the current device pose so the object
             never jumps)
  engage     {"kind":"engage","p":[x,y,z],"q":[w,x,y,z]}
  disengage  {"kind":"disengage"}
  pose       {"kind":"pose","tick":7,"p":[...],"q":[...],"dt":0.0167}

Outbound: "ack" (engage acks carry the current object pose), "object" with
the stepped pose, evaluated gains and per-step compliance flags, or "error"
with the same parse/config/engine taxonomy the batch API uses.  Errors
never close the connection.  Pose messages while disengaged are
acknowledged and only update the tracked device pose.

The object pose lives in an ObjectStore shared across connections, so
reconnecting clients keep manipulating the same object.
"""

from __future__ import annotations

import json
from typing import Any

from ..compliance import step_verdict
from ..engine import (
    MappingConfig,
    MappingKind,
    TrackerSample,
    disengage,
    engage_config,
    parse_mapping_kind,
    step,
)
from ..errors import ConfigError, EngineError, TraceError
from ..gains import ConstantGain, format_gain_spec, parse_gain_spec
from ..geometry import IDENTITY_POSE, Pose, Vec3
from ..traces import incoming_quat


def default_config() -> MappingConfig:
    # relative mapping, amplified rotations, egocentric translations with
    # allocentric rotations: the combination that works best in practice
    # for handheld control
    return MappingConfig(
        MappingKind.RELATIVE,
        ConstantGain(1.0),
        ConstantGain(3.0),
        ego_t=True,
        ego_r=False,
    )


class ObjectStore:
    """Holds the object pose across sessions and connections."""

    def __init__(self, pose: Pose = IDENTITY_POSE) -> None:
        self.pose = pose


def _vec_field(msg: dict, name: str) -> Vec3:
    v = msg.get(name)
    if not (isinstance(v, (list, tuple)) and len(v) == 3):
        raise TraceError(f"message field {name!r} must be a list of three numbers")
    try:
        return Vec3(float(v[0]), float(v[1]), float(v[2]))
    except (TypeError, ValueError):
        raise TraceError(f"message field {name!r} must be numeric") from None


def _quat_field(msg: dict, name: str):
    q = msg.get(name)
    if not (isinstance(q, (list, tuple)) and len(q) == 4):
        raise TraceError(f"message field {name!r} must be a list of four numbers")
    try:
        w, x, y, z = (float(c) for c in q)
    except (TypeError, ValueError):
        raise TraceError(f"message field {name!r} must be numeric") from None
    return incoming_quat(w, x, y, z, where=f"message field {name!r}")


def _pose_fields(msg: dict) -> Pose:
    return Pose(_vec_field(msg, "p"), _quat_field(msg, "q"))


class SessionDriver:
    """One protocol conversation.  Feed dicts in, get dicts out."""

    def __init__(
        self,
        config: MappingConfig | None = None,
        store: ObjectStore | None = None,
        tol: float = 1e-9,
    ) -> None:
        self.config = config if config is not None else default_config()
        self.store = store if store is not None else ObjectStore()
        self.tol = tol
        self.session = None
        self.last_device: Pose | None = None

    # -- message handling

    def handle_line(self, line: str) -> list[dict]:
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as e:
            return [_error("parse", f"bad JSON: {e}")]
        if not isinstance(msg, dict):
            return [_error("parse", "message must be a JSON object")]
        return self.handle(msg)

    def handle(self, msg: dict) -> list[dict]:
        try:
            kind = msg.get("kind")
            if kind == "pose":
                return self._on_pose(msg)
            if kind == "engage":
                return self._on_engage(msg)
            if kind == "disengage":
                return self._on_disengage()
            if kind == "config":
                return self._on_config(msg)
            return [_error("parse", f"unknown message kind {kind!r}")]
        except TraceError as e:
            return [_error("parse", str(e))]
        except ConfigError as e:
            return [_error("config", str(e))]
        except EngineError as e:
            return [_error("engine", str(e))]

    # -- handlers

    def _on_engage(self, msg: dict) -> list[dict]:
        if self.session is not None and self.session.engaged:
            raise EngineError("already engaged")
        device = _pose_fields(msg)
        self.session = engage_config(self.config, device, self.store.pose)
        self.last_device = device
        p, q = self.store.pose
        return [
            {
                "kind": "ack",
                "ack": "engage",
                "p": [p.x, p.y, p.z],
                "q": [q.w, q.x, q.y, q.z],
            }
        ]

    def _on_disengage(self) -> list[dict]:
        if self.session is None or not self.session.engaged:
            raise EngineError("not engaged")
        disengage(self.session)
        return [{"kind": "ack", "ack": "disengage"}]

    def _on_pose(self, msg: dict) -> list[dict]:
        device = _pose_fields(msg)
        tick = msg.get("tick", 0)
        if not isinstance(tick, int) or isinstance(tick, bool):
            raise TraceError("message field 'tick' must be an integer")
        dt = msg.get("dt", 1.0 / 60.0)
        if not isinstance(dt, (int, float)) or isinstance(dt, bool):
            raise TraceError("message field 'dt' must be a number")
        if self.session is None or not self.session.engaged:
            self.last_device = device
            return [{"kind": "ack", "ack": "pose"}]

        session = self.session
        prev_device = session.prev_device
        prev_object = session.object_pose
        sample = TrackerSample(session.t + 1, device, float(dt))
        obj = step(session, sample)
        self.store.pose = obj
        self.last_device = device
        verdict = step_verdict(prev_device, device, prev_object, obj, self.tol, tick)
        p, q = obj
        return [
            {
                "kind": "object",
                "tick": tick,
                "p": [p.x, p.y, p.z],
                "q": [q.w, q.x, q.y, q.z],
                "k_t": session.last_k_t,
                "k_r": session.last_k_r,
                "compliant_t": verdict.compliant_t,
                "compliant_r": verdict.compliant_r,
            }
        ]

    def _on_config(self, msg: dict) -> list[dict]:
        cfg = self.config
        mapping = cfg.kind
        if "mapping" in msg:
            mapping = parse_mapping_kind(_str_field(msg, "mapping"))
        gain_t = parse_gain_spec(_str_field(msg, "gain_t")) if "gain_t" in msg else cfg.gain_t
        gain_r = parse_gain_spec(_str_field(msg, "gain_r")) if "gain_r" in msg else cfg.gain_r
        ego_t = _bool_field(msg, "ego_t") if "ego_t" in msg else cfg.ego_t
        ego_r = _bool_field(msg, "ego_r") if "ego_r" in msg else cfg.ego_r
        if "tol" in msg:
            tol = msg["tol"]
            if not isinstance(tol, (int, float)) or not tol > 0:
                raise ConfigError("tol must be a positive number")
            self.tol = float(tol)
        self.config = MappingConfig(mapping, gain_t, gain_r, ego_t, ego_r)
        if self.session is not None and self.session.engaged:
            # swap the law mid-flight: re-engage where the device is now so
            # the object pose is continuous across the switch
            self.session = engage_config(
                self.config, self.session.prev_device, self.session.object_pose
            )
        return [
            {
                "kind": "ack",
                "ack": "config",
                "mapping": self.config.kind.value,
                "gain_t": format_gain_spec(self.config.gain_t),
                "gain_r": format_gain_spec(self.config.gain_r),
                "ego_t": self.config.ego_t,
                "ego_r": self.config.ego_r,
                "tol": self.tol,
            }
        ]


def _str_field(msg: dict, name: str) -> str:
    v = msg.get(name)
    if not isinstance(v, str):
        raise TraceError(f"message field {name!r} must be a string")
    return v


def _bool_field(msg: dict, name: str) -> bool:
    v = msg.get(name)
    if not isinstance(v, bool):
        raise TraceError(f"message field {name!r} must be a boolean")
    return v


def _error(kind: str, message: str) -> dict[str, Any]:
    return {"kind": "error", "error": kind, "message": message}
