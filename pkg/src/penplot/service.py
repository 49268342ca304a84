"""Session service: named sets of panels re-rendered on parameter change.

The store is framework-free; `create_app` wires it to the HTTP surface.
Within a session, mutations are serialized by a lock while readers see
atomically published immutable panel entries.
"""

from __future__ import annotations

import math
import threading
import time
import uuid
from dataclasses import dataclass, field

from .backends import PageSetup, emit_hpgl, emit_svg
from .core import DisplayList
from .demos import demo_names, render_demo
from .errors import CapacityError, NotFoundError, SpecValidationError
from .surface import EulerAngles, Orthographic, Perspective, Projection, default_view

MAX_SESSIONS = 64
MAX_PANELS = 16
RESOLUTION_MIN = 2
RESOLUTION_MAX = 512
IDLE_EXPIRY_SECONDS = 30 * 60


@dataclass(frozen=True)
class PanelSpec:
    demo: str
    euler: EulerAngles
    resolution: int
    projection: Projection
    style: str = "rows"

    def validate(self) -> None:
        fields = []
        if self.demo not in demo_names():
            fields.append("demo")
        for name in ("phi", "theta", "psi"):
            v = getattr(self.euler, name, None)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                fields.append(f"euler.{name}")
        if not (isinstance(self.resolution, int)
                and RESOLUTION_MIN <= self.resolution <= RESOLUTION_MAX):
            fields.append("resolution")
        if not isinstance(self.projection, (Orthographic, Perspective)):
            fields.append("projection")
        if self.style not in ("rows", "mesh"):
            fields.append("style")
        if fields:
            raise SpecValidationError(fields)

    def to_json(self) -> dict:
        out = {
            "demo": self.demo,
            "euler": {"phi": self.euler.phi, "theta": self.euler.theta,
                      "psi": self.euler.psi},
            "resolution": self.resolution,
            "projection": ("perspective" if isinstance(self.projection, Perspective)
                           else "orthographic"),
            "style": self.style,
        }
        if isinstance(self.projection, Perspective):
            out["distance"] = self.projection.distance
        return out

    @staticmethod
    def from_json(payload) -> "PanelSpec":
        fields = []
        if not isinstance(payload, dict):
            raise SpecValidationError(["body"])

        demo = payload.get("demo")
        if not isinstance(demo, str) or demo not in demo_names():
            fields.append("demo")

        euler_raw = payload.get("euler")
        angles = {}
        for name in ("phi", "theta", "psi"):
            v = euler_raw.get(name) if isinstance(euler_raw, dict) else None
            if isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v):
                angles[name] = float(v)
            else:
                fields.append(f"euler.{name}")

        resolution = payload.get("resolution")
        if not (isinstance(resolution, int) and not isinstance(resolution, bool)
                and RESOLUTION_MIN <= resolution <= RESOLUTION_MAX):
            fields.append("resolution")

        projection_name = payload.get("projection", "orthographic")
        projection: Projection = Orthographic()
        if projection_name == "perspective":
            distance = payload.get("distance")
            if (isinstance(distance, (int, float)) and not isinstance(distance, bool)
                    and math.isfinite(distance) and distance > 0):
                projection = Perspective(float(distance))
            else:
                fields.append("distance")
        elif projection_name != "orthographic":
            fields.append("projection")

        style = payload.get("style", "rows")
        if style not in ("rows", "mesh"):
            fields.append("style")

        if fields:
            raise SpecValidationError(fields)
        return PanelSpec(demo, EulerAngles(**angles), resolution, projection, style)


def default_panel_spec() -> PanelSpec:
    euler, projection = default_view()
    return PanelSpec("sinc", euler, 32, projection, "rows")


@dataclass(frozen=True)
class PanelEntry:
    spec: PanelSpec
    display_list: DisplayList
    revision: int


def _render(spec: PanelSpec) -> DisplayList:
    return render_demo(spec.demo, spec.euler, spec.projection,
                       spec.resolution, spec.style)


class Session:
    def __init__(self, session_id: str, created: float):
        self.id = session_id
        self.lock = threading.Lock()
        self.last_access = created
        self._revision = 1
        self.panels: list[PanelEntry] = [PanelEntry(default_panel_spec(),
                                                    _render(default_panel_spec()), 1)]

    def snapshot(self) -> list[PanelEntry]:
        return list(self.panels)

    def panel(self, index: int) -> PanelEntry:
        panels = self.panels
        if not 0 <= index < len(panels):
            raise NotFoundError(f"panel {index} not found")
        return panels[index]

    def update_panel(self, index: int, spec: PanelSpec) -> int:
        spec.validate()
        with self.lock:
            if not 0 <= index < len(self.panels):
                raise NotFoundError(f"panel {index} not found")
            rendered = _render(spec)
            self._revision += 1
            entry = PanelEntry(spec, rendered, self._revision)
            panels = list(self.panels)
            panels[index] = entry
            self.panels = panels  # atomic publish
            return entry.revision

    def add_panel(self, spec: PanelSpec) -> tuple[int, int]:
        spec.validate()
        with self.lock:
            if len(self.panels) >= MAX_PANELS:
                raise CapacityError(f"session already has {MAX_PANELS} panels")
            rendered = _render(spec)
            self._revision += 1
            entry = PanelEntry(spec, rendered, self._revision)
            panels = list(self.panels)
            panels.append(entry)
            self.panels = panels
            return len(panels) - 1, entry.revision

    def remove_panel(self, index: int) -> int:
        with self.lock:
            if not 0 <= index < len(self.panels):
                raise NotFoundError(f"panel {index} not found")
            if len(self.panels) <= 1:
                raise CapacityError("a session keeps at least one panel")
            self._revision += 1
            panels = list(self.panels)
            del panels[index]
            self.panels = panels
            return self._revision


class SessionStore:
    def __init__(self, clock=time.monotonic):
        self._clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def _sweep(self, now: float) -> None:
        stale = [sid for sid, s in self._sessions.items()
                 if now - s.last_access > IDLE_EXPIRY_SECONDS]
        for sid in stale:
            del self._sessions[sid]

    def create_session(self) -> Session:
        now = self._clock()
        with self._lock:
            self._sweep(now)
            if len(self._sessions) >= MAX_SESSIONS:
                raise CapacityError(f"session limit {MAX_SESSIONS} reached")
            session = Session(uuid.uuid4().hex, now)
            self._sessions[session.id] = session
            return session

    def get(self, session_id: str) -> Session:
        now = self._clock()
        with self._lock:
            self._sweep(now)
            session = self._sessions.get(session_id)
            if session is None:
                raise NotFoundError(f"session {session_id!r} not found")
            session.last_access = now
            return session

    def count(self) -> int:
        with self._lock:
            return len(self._sessions)


def serialize_display_list(dl: DisplayList, revision: int) -> dict:
    """Wire form: M/L/K/P commands with mm coordinates fixed to 3 decimals."""
    commands = []
    for cmd in dl.commands:
        op = cmd[0]
        if op in ("M", "L", "K"):
            commands.append([op, round(cmd[1], 3), round(cmd[2], 3)])
        elif op == "P":
            commands.append([op, cmd[1]])
        # frame brackets are not part of the wire schema
    return {
        "revision": revision,
        "commands": commands,
        "bbox": [round(v, 3) for v in dl.bbox],
    }


EXPORT_MEDIA_TYPES = {
    "hpgl": "application/vnd.hp-hpgl",
    "svg": "image/svg+xml",
}


def export_panel_bytes(entry: PanelEntry, fmt: str) -> bytes:
    if fmt == "hpgl":
        return emit_hpgl(entry.display_list, PageSetup()).file_text().encode("ascii")
    if fmt == "svg":
        return emit_svg(entry.display_list, PageSetup()).encode("utf-8")
    raise SpecValidationError(["format"])


def create_app(store: SessionStore | None = None):
    """FastAPI app exposing the wire contract over a SessionStore."""
    from fastapi import Body, FastAPI, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse, Response

    app = FastAPI(title="penplot session service")
    # The browser viewer is served from an arbitrary static origin.
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    app.state.store = store or SessionStore()

    def _store() -> SessionStore:
        return app.state.store

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(SpecValidationError)
    async def _invalid(request: Request, exc: SpecValidationError):
        return JSONResponse(status_code=400,
                            content={"detail": str(exc), "fields": exc.fields})

    @app.exception_handler(CapacityError)
    async def _capacity(request: Request, exc: CapacityError):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.post("/sessions")
    def create_session():
        return {"id": _store().create_session().id}

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        session = _store().get(sid)
        return {"panels": [{"spec": e.spec.to_json(), "revision": e.revision}
                           for e in session.snapshot()]}

    @app.put("/sessions/{sid}/panels/{index}")
    def update_panel(sid: str, index: int, payload: dict = Body(...)):
        spec = PanelSpec.from_json(payload)
        return {"revision": _store().get(sid).update_panel(index, spec)}

    @app.post("/sessions/{sid}/panels")
    def add_panel(sid: str, payload: dict = Body(...)):
        spec = PanelSpec.from_json(payload)
        index, revision = _store().get(sid).add_panel(spec)
        return {"index": index, "revision": revision}

    @app.delete("/sessions/{sid}/panels/{index}")
    def remove_panel(sid: str, index: int):
        return {"revision": _store().get(sid).remove_panel(index)}

    @app.get("/sessions/{sid}/panels/{index}/displaylist")
    def get_displaylist(sid: str, index: int):
        entry = _store().get(sid).panel(index)
        return serialize_display_list(entry.display_list, entry.revision)

    @app.get("/sessions/{sid}/panels/{index}/export")
    def export_panel(sid: str, index: int, format: str = "svg"):
        if format not in EXPORT_MEDIA_TYPES:
            raise SpecValidationError(["format"])
        entry = _store().get(sid).panel(index)
        return Response(content=export_panel_bytes(entry, format),
                        media_type=EXPORT_MEDIA_TYPES[format])

    return app
