"""HTTP facade for the interactive annotation workflow.

Sessions are in-memory (uploads spilled to the data directory); training runs
in a background thread per session and is polled through job endpoints.  All
pipeline calls are the same pure functions the CLI uses, so identical inputs,
seeds, and parameters yield identical masks.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, File, HTTPException, UploadFile
from fastapi.responses import Response
from pydantic import BaseModel

from .image import (AnnotatedPoint, BinaryMask, FeatureConfig, Image,
                    load_image, load_mask, mask_png_bytes)
from .landscape import refs_from_flat_indices, sweep
from .network import NetworkSpec
from .pipeline import (SegmentationResult, default_arch, segment_image,
                       train_from_points)
from .training import TrainConfig


@dataclass
class Job:
    id: str
    status: str = "running"          # running | done | failed
    progress: float = 0.0
    ba: float | None = None
    error: str | None = None


@dataclass
class Session:
    id: str
    image: Image
    gold: BinaryMask | None = None
    points: list = field(default_factory=list)
    net: NetworkSpec | None = None
    result: SegmentationResult | None = None
    fcfg: FeatureConfig | None = None
    jobs: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def running(self) -> bool:
        return any(j.status == "running" for j in self.jobs.values())


class PointBody(BaseModel):
    x: int
    y: int
    role: str = "prototype"
    class_label: str = "object"


class TrainBody(BaseModel):
    """Training request: optimizer settings plus feature/similarity parameters."""

    seed: int = 0
    starts: int = 10
    steps: int = 30
    stepsize: float = 0.05
    fdres: float = 0.01
    objective: str = "a"
    radius: int = 3
    sort: bool = True
    d_first: float = 5.0
    gain: float = 20.0
    offset: float = 0.0
    threshold: float = 0.5
    subsample: int = 10


def _points_payload(session: Session) -> list:
    return [{"n": n, "x": p.x, "y": p.y, "role": p.role, "class": p.class_label}
            for n, p in enumerate(session.points)]


def create_app(data_dir="mmnn-data", ui_dir=None) -> FastAPI:
    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="mmnn annotation service")
    sessions: dict[str, Session] = {}

    def get_session(sid: str) -> Session:
        session = sessions.get(sid)
        if session is None:
            raise HTTPException(404, f"unknown session {sid}")
        return session

    @app.post("/api/sessions", status_code=201)
    async def create_session(image: UploadFile = File(...),
                             gold: UploadFile | None = File(None)):
        sid = uuid.uuid4().hex[:12]
        img_path = data_dir / f"{sid}_image{Path(image.filename or 'x.png').suffix}"
        img_path.write_bytes(await image.read())
        try:
            loaded = load_image(img_path)
        except Exception as exc:
            raise HTTPException(400, f"cannot decode image: {exc}")
        gold_mask = None
        if gold is not None:
            gold_path = data_dir / f"{sid}_gold{Path(gold.filename or 'g.png').suffix}"
            gold_path.write_bytes(await gold.read())
            try:
                gold_mask = load_mask(gold_path)
            except Exception as exc:
                raise HTTPException(400, f"cannot decode gold mask: {exc}")
            if (gold_mask.height, gold_mask.width) != (loaded.height, loaded.width):
                raise HTTPException(400, "gold mask dimensions do not match image")
        sessions[sid] = Session(id=sid, image=loaded, gold=gold_mask)
        return {"id": sid, "width": loaded.width, "height": loaded.height,
                "has_gold": gold_mask is not None}

    @app.post("/api/sessions/{sid}/points")
    def add_point(sid: str, body: PointBody):
        session = get_session(sid)
        if not (0 <= body.x < session.image.width):
            raise HTTPException(
                400, {"field": "x", "message":
                      f"x={body.x} outside [0, {session.image.width})"})
        if not (0 <= body.y < session.image.height):
            raise HTTPException(
                400, {"field": "y", "message":
                      f"y={body.y} outside [0, {session.image.height})"})
        try:
            point = AnnotatedPoint(body.x, body.y, body.role, body.class_label)
        except ValueError as exc:
            raise HTTPException(400, {"field": "role", "message": str(exc)})
        with session.lock:
            session.points.append(point)
            return _points_payload(session)

    @app.delete("/api/sessions/{sid}/points/{n}")
    def delete_point(sid: str, n: int):
        session = get_session(sid)
        with session.lock:
            if not (0 <= n < len(session.points)):
                raise HTTPException(404, f"no point {n}")
            session.points.pop(n)
            return _points_payload(session)

    @app.post("/api/sessions/{sid}/train", status_code=202)
    def train(sid: str, body: TrainBody):
        session = get_session(sid)
        with session.lock:
            if session.running:
                raise HTTPException(409, "a training job is already running")
            if not session.points:
                raise HTTPException(400, "no annotated points")
            if session.gold is None:
                raise HTTPException(400, "training requires a gold mask upload")
            try:
                tcfg = TrainConfig(num_starts=body.starts, max_steps=body.steps,
                                   fd_resolution=body.fdres,
                                   step_size=body.stepsize, seed=body.seed,
                                   objective=body.objective)
            except ValueError as exc:
                raise HTTPException(400, str(exc))
            job = Job(id=uuid.uuid4().hex[:12])
            session.jobs[job.id] = job
            points = list(session.points)

        arch = default_arch(first_strictness=body.d_first, head_gain=body.gain,
                            head_offset=body.offset, radius=body.radius,
                            threshold=body.threshold)
        fcfg = FeatureConfig(body.radius, body.sort)

        def work():
            try:
                job.progress = 0.1
                net, _ = train_from_points(session.image, session.gold, points,
                                           fcfg, arch, tcfg, body.subsample)
                job.progress = 0.7
                result = segment_image(session.image, net, fcfg, body.threshold)
                result.attach_gold(session.gold)
                with session.lock:
                    session.net = net
                    session.result = result
                    session.fcfg = fcfg
                job.ba = result.ba
                job.progress = 1.0
                job.status = "done"
            except Exception as exc:
                job.error = str(exc)
                job.status = "failed"

        threading.Thread(target=work, daemon=True).start()
        return {"job_id": job.id}

    @app.get("/api/sessions/{sid}/jobs/{jid}")
    def job_status(sid: str, jid: str):
        session = get_session(sid)
        job = session.jobs.get(jid)
        if job is None:
            raise HTTPException(404, f"unknown job {jid}")
        payload = {"status": job.status, "progress": job.progress}
        if job.status == "done":
            payload["ba"] = job.ba
        if job.status == "failed":
            payload["error"] = job.error
        return payload

    @app.get("/api/sessions/{sid}/segmentation.png")
    def segmentation_png(sid: str):
        session = get_session(sid)
        with session.lock:
            if session.result is None:
                raise HTTPException(404, "no segmentation yet")
            return Response(mask_png_bytes(session.result.mask),
                            media_type="image/png")

    @app.get("/api/sessions/{sid}/raw.json")
    def raw_outputs(sid: str):
        session = get_session(sid)
        with session.lock:
            if session.result is None:
                raise HTTPException(404, "no segmentation yet")
            raw = session.result.raw
            return {"width": raw.shape[1], "height": raw.shape[0],
                    "values": raw.reshape(-1).tolist()}

    @app.get("/api/sessions/{sid}/landscape")
    def landscape(sid: str, free: str = "w0,w1", res: float = 0.05,
                  lo: float = -1.0, hi: float = 1.0):
        session = get_session(sid)
        with session.lock:
            if session.net is None or session.fcfg is None:
                raise HTTPException(404, "train a network first")
            if session.gold is None:
                raise HTTPException(400, "landscape requires a gold mask")
            net, fcfg = session.net, session.fcfg
        try:
            indices = [int(p.strip().lstrip("w")) for p in free.split(",")]
            if len(indices) != 2:
                raise ValueError("need exactly two indices")
            refs = refs_from_flat_indices(net, indices)
            grid = sweep(net, session.image, session.gold, fcfg, refs,
                         ranges=((lo, hi), (lo, hi)), resolution=res)
        except ValueError as exc:
            raise HTTPException(400, str(exc))
        return {"axis1": grid.axis1.tolist(), "axis2": grid.axis2.tolist(),
                "values": grid.values.tolist(),
                "argmax": list(grid.argmax_point)}

    if ui_dir is None:
        ui_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    ui_dir = Path(ui_dir)
    if ui_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app
