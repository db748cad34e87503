"""RESTful API over the engine: tracks, events (with server-push stream),
geofences, detections, cues, similarity search, projection, analytics,
replay, status."""

from __future__ import annotations

import json
import threading
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import StreamingResponse
from pydantic import BaseModel, Field

from .engine import CopEngine, replay_log, event_payloads
from .events import EventKind
from .eventlog import EventLogRecord
from .geo import GeoError, GeofenceBox, GeoPoint
from .similarity import ProjectionConfig, SimilarityError, UnknownFeatureId
from .tracks import NoReportBefore, UnknownMmsi


def _report_dict(r) -> dict:
    return {"mmsi": r.mmsi, "timestamp": r.timestamp, "lat": r.lat, "lon": r.lon,
            "sog": r.sog, "cog": r.cog, "heading": r.heading}


def _track_dict(entry) -> dict:
    return {
        "mmsi": entry.mmsi,
        "last_report": _report_dict(entry.last_report),
        "predicted": {"lat": entry.predicted.lat, "lon": entry.predicted.lon},
        "staleness": entry.staleness,
        "held": entry.held,
        "verification_state": entry.verification_state.value,
        "presence": entry.presence.value,
        "vessel_name": entry.vessel_name,
    }


class GeofenceIn(BaseModel):
    id: str
    min_lat: float
    max_lat: float
    min_lon: float
    max_lon: float


class CueIn(BaseModel):
    mmsi: int
    t: float
    reason: str = "manual"


class SearchIn(BaseModel):
    feature_id: Optional[str] = None
    values: Optional[list[float]] = None
    k: int = Field(default=10, ge=1)


class ReplayIn(BaseModel):
    path: str
    speed: Optional[float] = None


def create_app(engine: CopEngine, clock=None) -> FastAPI:
    app = FastAPI(title="maricop", version="0.1.0")
    app.state.engine = engine
    now = clock or (lambda: engine._last_input_t or 0.0)

    @app.get("/tracks")
    def get_tracks():
        snap = engine.store.snapshot(now())
        return {"as_of": snap.as_of, "tracks": [_track_dict(e) for e in snap.entries]}

    @app.get("/tracks/{mmsi}")
    def get_track(mmsi: int):
        snap = engine.store.snapshot(now())
        entry = snap.get(mmsi)
        if entry is None:
            raise HTTPException(404, detail=f"unknown mmsi {mmsi}")
        return _track_dict(entry)

    @app.get("/tracks/{mmsi}/prediction")
    def get_prediction(mmsi: int, t: float):
        try:
            pred = engine.store.predict_position(mmsi, t)
        except (UnknownMmsi, NoReportBefore) as e:
            raise HTTPException(404, detail=str(e))
        return {"mmsi": mmsi, "t": t,
                "position": {"lat": pred.position.lat, "lon": pred.position.lon},
                "staleness": pred.staleness, "held": pred.held}

    @app.get("/events")
    def get_events(kind: Optional[str] = None, since_seq: int = 0,
                   since_t: Optional[float] = None,
                   limit: Optional[int] = Query(default=None, ge=1)):
        try:
            k = EventKind(kind) if kind else None
        except ValueError:
            raise HTTPException(400, detail=f"unknown event kind {kind!r}")
        recs = engine.log.query(kind=k, since_seq=since_seq, since_t=since_t,
                                limit=limit)
        return {"events": [r.to_dict() for r in recs]}

    @app.get("/events/stream")
    def stream_events(request: Request, since_seq: int = 0):
        def generate():
            cursor = since_seq
            while True:
                batch = engine.log.wait_for(cursor, timeout=0.5)
                if not batch:
                    # periodic comment line keeps the connection warm and
                    # gives the server a point to notice a dropped client
                    yield ": keepalive\n\n"
                    continue
                for rec in batch:
                    payload = json.dumps(rec.to_dict())
                    yield f"id: {rec.seq}\ndata: {payload}\n\n"
                    cursor = rec.seq

        return StreamingResponse(generate(), media_type="text/event-stream")

    @app.post("/geofences", status_code=201)
    def post_geofence(body: GeofenceIn):
        try:
            fence = GeofenceBox(body.id, body.min_lat, body.max_lat,
                                body.min_lon, body.max_lon)
        except GeoError as e:
            raise HTTPException(400, detail=str(e))
        engine.add_geofence(fence)
        return body.model_dump()

    @app.get("/geofences")
    def get_geofences():
        return {"geofences": [
            {"id": f.id, "min_lat": f.min_lat, "max_lat": f.max_lat,
             "min_lon": f.min_lon, "max_lon": f.max_lon}
            for f in engine.geofences.values()]}

    @app.delete("/geofences/{fence_id}")
    def delete_geofence(fence_id: str):
        if not engine.delete_geofence(fence_id):
            raise HTTPException(404, detail=f"unknown fence {fence_id!r}")
        return {"deleted": fence_id}

    @app.get("/detections")
    def get_detections(since_t: Optional[float] = None,
                       class_label: Optional[str] = Query(default=None, alias="class")):
        dets = engine.fmv.query(since_t=since_t, class_label=class_label)
        return {"detections": [{
            "detection_id": d.detection_id,
            "frame_id": d.frame.frame_id,
            "timestamp": d.frame.timestamp,
            "class_label": d.class_label,
            "confidence": d.confidence,
            "bbox": {"x_min": d.bbox.x_min, "y_min": d.bbox.y_min,
                     "x_max": d.bbox.x_max, "y_max": d.bbox.y_max},
            "geolocation": ({"lat": d.geolocation.lat, "lon": d.geolocation.lon}
                            if d.geolocation else None),
            "feature_id": d.feature_id,
        } for d in dets]}

    @app.get("/cues")
    def get_cues():
        return {"cues": [c.to_dict() for c in
                         sorted(engine.fusion.cues.values(), key=lambda c: c.cue_id)]}

    @app.post("/cues", status_code=201)
    def post_cue(body: CueIn):
        if body.mmsi not in engine.store:
            raise HTTPException(404, detail=f"unknown mmsi {body.mmsi}")
        try:
            pred = engine.store.predict_position(body.mmsi, body.t)
        except NoReportBefore as e:
            raise HTTPException(400, detail=str(e))
        cue = engine.fusion.create_manual_cue(body.mmsi, pred.position, body.t,
                                              body.reason)
        return cue.to_dict()

    @app.post("/search/similar")
    def search_similar(body: SearchIn):
        if (body.feature_id is None) == (body.values is None):
            raise HTTPException(400, detail="provide exactly one of feature_id or values")
        query = body.feature_id if body.feature_id is not None else body.values
        try:
            result = engine.vectors.search_topk(query, body.k)
        except UnknownFeatureId as e:
            raise HTTPException(404, detail=f"unknown feature id {e}")
        except SimilarityError as e:
            raise HTTPException(400, detail=str(e))
        return {"results": [{"feature_id": fid, "similarity": sim}
                            for fid, sim in result]}

    @app.get("/projection")
    def get_projection(seed: Optional[int] = None, k: Optional[int] = None):
        cfg = engine.config.projection
        cfg = ProjectionConfig(
            k_neighbors=k if k is not None else cfg.k_neighbors,
            n_epochs=cfg.n_epochs, learning_rate=cfg.learning_rate,
            negative_samples=cfg.negative_samples,
            seed=seed if seed is not None else cfg.seed)
        try:
            layout = engine.vectors.project_2d(cfg)
        except SimilarityError as e:
            raise HTTPException(400, detail=str(e))
        return {"projection": [
            {"feature_id": fid, "x": xy[0], "y": xy[1],
             "class_label": engine.vectors.get(fid).metadata.get("class_label")}
            for fid, xy in sorted(layout.items())]}

    @app.get("/analytics/counts")
    def get_counts(class_label: Optional[str] = Query(default=None, alias="class"),
                   since_t: Optional[float] = None):
        series = engine.analytics.series
        labels = [class_label] if class_label else sorted(series)
        out = {}
        for label in labels:
            s = series.get(label)
            if s is None:
                continue
            out[label] = [{"bucket_start": b, "count": c}
                          for b, c in s.as_pairs(since_t)]
        return {"counts": out}

    @app.post("/replay")
    def post_replay(body: ReplayIn):
        try:
            replayed = replay_log(body.path, engine.config, body.speed)
        except OSError as e:
            raise HTTPException(400, detail=str(e))
        return {"count": replayed.log.last_seq,
                "corrupt_inputs": replayed.corrupt_inputs,
                "events": event_payloads(replayed)}

    @app.get("/status")
    def get_status():
        return {
            "tracks": len(engine.store.mmsis()),
            "events": engine.log.last_seq,
            "detections": len(engine.fmv.records),
            "vectors": len(engine.vectors),
            "geofences": sorted(engine.geofences),
            "decoder": {
                "sentences": engine.decoder.stats.sentences,
                "checksum_failures": engine.decoder.stats.checksum_failures,
                "malformed": engine.decoder.stats.malformed,
                "unsupported_types": engine.decoder.stats.unsupported_types,
                "fragment_timeouts": engine.decoder.assembler.timeouts,
            },
            "corrupt_inputs": engine.corrupt_inputs,
        }

    return app
