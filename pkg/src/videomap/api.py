"""HTTP service over a built project: the UI's only door into the engine.

One immutable project snapshot per process. GETs are pure reads and return
canonical JSON (byte-identical across calls). Route planning runs under a
30 s cooperative deadline; rendering is asynchronous (submit, poll, fetch).
Every engine error surfaces as {"code": <error name>, "message": ...} with
a stable HTTP status.
"""

from __future__ import annotations

import io
import os
import tempfile
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from typing import Any

from fastapi import FastAPI, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from videomap import errors as E
from videomap.canon import canonical_bytes
from videomap.extensions import (
    build_semantic_districts,
    decode_image,
    find_highlight,
    summarize,
)
from videomap.ingest import get_frame_image
from videomap.lens import LensRegistry
from videomap.mapmodel import nearest_paths, node_details
from videomap.media import MediaTool
from videomap.project import MapProject
from videomap.routing import (
    MAX_ROUTE_VIDEOS,
    CutList,
    build_streets,
    chain_in_order,
    cutlist_to_json,
    plan_route,
    route_to_cutlist,
)
from videomap.search import match_story, prompt_search

ROUTE_TIMEOUT_S = 30.0

_STATUS = {
    E.FrameNotFound: 404, E.UnknownVideo: 404, E.LensNotFound: 404,
    E.LandmarkNotFound: 404, E.MissingStreet: 404,
    E.ProviderUnavailable: 502, E.ModelAssetMissing: 502,
    E.RequestTimeout: 504,
    E.CorruptManifest: 500, E.MagicMismatch: 500, E.TruncatedSidecar: 500,
    E.UnsupportedVersion: 500,
}
_DEFAULT_STATUS = 422  # bad input of one kind or another


def _status_for(exc: E.EngineError) -> int:
    for klass, status in _STATUS.items():
        if isinstance(exc, klass):
            return status
    return _DEFAULT_STATUS


class CanonicalJSONResponse(JSONResponse):
    def render(self, content: Any) -> bytes:
        return canonical_bytes(content)


class RenderJobs:
    """Asynchronous render queue: submit a cutlist, poll, download."""

    def __init__(self, media: MediaTool, out_dir: str, workers: int):
        self._media = media
        self._dir = out_dir
        self._pool = ThreadPoolExecutor(max_workers=workers)
        self._lock = threading.Lock()
        self._jobs: dict[str, dict] = {}

    def submit(self, cutlist_json: str) -> str:
        job_id = uuid.uuid4().hex[:12]
        cl_path = os.path.join(self._dir, f"cutlist_{job_id}.json")
        out_path = os.path.join(self._dir, f"render_{job_id}.media")
        with open(cl_path, "w", encoding="utf-8") as fh:
            fh.write(cutlist_json)
        with self._lock:
            self._jobs[job_id] = {"status": "queued", "path": out_path, "error": None}
        self._pool.submit(self._run, job_id, cl_path, out_path)
        return job_id

    def _run(self, job_id: str, cl_path: str, out_path: str) -> None:
        with self._lock:
            self._jobs[job_id]["status"] = "running"
        try:
            self._media.render(cl_path, out_path)
            status, err = "done", None
        except Exception as exc:
            status, err = "error", str(exc)
        with self._lock:
            self._jobs[job_id].update(status=status, error=err)

    def get(self, job_id: str) -> dict:
        with self._lock:
            job = self._jobs.get(job_id)
            return dict(job) if job else None


def _edge_payload(edge) -> dict:
    return {
        "lens": edge.lens,
        "from": list(edge.from_frame),
        "to": list(edge.to_frame),
        "distance": edge.distance,
    }


def _route_payload(route) -> dict:
    return {
        "lens": route.lens,
        "order": list(route.order),
        "transitions": [_edge_payload(t) for t in route.transitions],
        "total_weight": route.total_weight,
    }


def _cutlist_payload(cutlist: CutList, project: MapProject) -> dict:
    import json

    return json.loads(cutlist_to_json(cutlist, project))


def create_app(project: MapProject, registry: LensRegistry, *,
               media: MediaTool | None = None,
               project_dir: str | None = None,
               cors_origin: str = "*",
               workers: int | None = None) -> FastAPI:
    media = media or MediaTool()
    work_dir = project_dir or tempfile.mkdtemp(prefix="videomap_api_")
    render_dir = os.path.join(work_dir, "renders")
    os.makedirs(render_dir, exist_ok=True)
    jobs = RenderJobs(media, render_dir, workers or os.cpu_count() or 2)
    district_cache: dict[tuple, Any] = {}
    cache_lock = threading.Lock()

    app = FastAPI(default_response_class=CanonicalJSONResponse)
    app.add_middleware(
        CORSMiddleware, allow_origins=[cors_origin], allow_methods=["*"],
        allow_headers=["*"])

    @app.exception_handler(E.EngineError)
    async def engine_error(request: Request, exc: E.EngineError):
        return CanonicalJSONResponse(
            {"code": exc.code, "message": str(exc)}, status_code=_status_for(exc))

    def semantic_set(lens: str, video_id: str, seed: int):
        key = (lens, video_id, seed)
        with cache_lock:
            if key not in district_cache:
                district_cache[key] = build_semantic_districts(
                    project, lens, video_id, seed=seed)
            return district_cache[key]

    # -- read endpoints ----------------------------------------------------

    @app.get("/api/lenses")
    def get_lenses():
        out = []
        for name in sorted(project.layouts):
            try:
                supports_text = registry.get(name).supports_text
            except E.LensNotFound:
                supports_text = False
            out.append({"name": name, "supports_text": supports_text})
        return {"lenses": out}

    @app.get("/api/assets")
    def get_assets():
        return {
            "assets": [
                {
                    "id": a.id, "path": a.path,
                    "filename": os.path.basename(a.path),
                    "duration_s": a.duration_s, "fps": a.fps,
                    "frame_count": a.frame_count,
                    "width": a.width, "height": a.height,
                }
                for a in project.assets.values()
            ]
        }

    @app.get("/api/map")
    def get_map(lens: str):
        points = project.layouts.get(lens)
        if points is None:
            raise E.LensNotFound(lens)
        districts = project.districts.get(lens, [])
        landmarks = project.landmarks.get(lens, [])
        return {
            "lens": lens,
            "points": [
                {
                    "video_id": p.video_id, "frame_index": p.frame_index,
                    "raw_xy": list(p.raw_xy), "display_xy": list(p.display_xy),
                }
                for p in points
            ],
            "districts": [
                {"id": d.id, "color_index": d.color_index, "kind": d.kind,
                 "members": [list(m) for m in d.member_frames]}
                for d in districts
            ],
            "landmarks": [
                {"district_id": lm.district_id, "anchor": list(lm.anchor_frame),
                 "thumbnail_ref": lm.thumbnail_ref}
                for lm in landmarks
            ],
        }

    @app.get("/api/frame/{video}/{index}")
    def get_frame(video: str, index: int):
        from PIL import Image

        asset = project.asset(video)
        record = project.frame(video, index)
        pixels = get_frame_image(asset, record, media=media)
        buf = io.BytesIO()
        Image.fromarray(pixels).save(buf, format="JPEG", quality=90)
        return Response(buf.getvalue(), media_type="image/jpeg")

    @app.get("/api/node/{video}/{index}/paths")
    def get_paths(video: str, index: int, lens: str, k: int = 10):
        frame = (video, index)
        edges = nearest_paths(project, lens, frame, k=k)
        details = node_details(project, frame)
        return {
            "lens": lens, "query": list(frame), "node": details,
            "edges": [_edge_payload(e) for e in edges],
        }

    # -- planning endpoints --------------------------------------------------

    def _plan_with_deadline(streets, video_ids, lens):
        deadline = time.monotonic() + ROUTE_TIMEOUT_S

        def cancel():
            if time.monotonic() > deadline:
                raise E.RequestTimeout(
                    f"route planning exceeded {ROUTE_TIMEOUT_S:.0f} s")
        return plan_route(streets, video_ids, lens=lens, cancel=cancel)

    @app.post("/api/route")
    async def post_route(request: Request):
        body = await request.json()
        lens = body["lens"]
        video_ids = [str(v) for v in body["video_ids"]]
        if len(video_ids) > MAX_ROUTE_VIDEOS:  # cheap bound check before any scan
            raise E.TooManyVideos(
                f"{len(video_ids)} videos exceeds DP bound of {MAX_ROUTE_VIDEOS}")
        streets = build_streets(project, lens, video_ids,
                                stride=project.config.street_stride)
        route = _plan_with_deadline(streets, video_ids, lens)
        return _route_payload(route)

    @app.post("/api/cutlist")
    async def post_cutlist(request: Request):
        body = await request.json()
        route_body = body.get("route", body)
        lens = route_body["lens"]
        order = [str(v) for v in route_body["order"]]
        route = chain_in_order(project, lens, order,
                               stride=project.config.street_stride)
        cutlist = route_to_cutlist(route, project,
                                   min_segment_s=project.config.min_segment_s)
        return _cutlist_payload(cutlist, project)

    @app.post("/api/render")
    async def post_render(request: Request):
        body = await request.json()
        cutlist = body.get("cutlist", body)
        if not isinstance(cutlist, dict) or "segments" not in cutlist:
            raise E.EmptyInput("render request needs a cutlist with segments")
        from videomap.canon import canonical_dumps

        return {"job_id": jobs.submit(canonical_dumps(cutlist))}

    @app.get("/api/render/{job_id}")
    def get_render(job_id: str):
        job = jobs.get(job_id)
        if job is None:
            raise E.FrameNotFound(f"no render job {job_id!r}")
        return {"job_id": job_id, "status": job["status"], "error": job["error"]}

    @app.get("/api/render/{job_id}/file")
    def get_render_file(job_id: str):
        job = jobs.get(job_id)
        if job is None or job["status"] != "done":
            raise E.FrameNotFound(f"render job {job_id!r} has no file")
        with open(job["path"], "rb") as fh:
            return Response(fh.read(), media_type="application/octet-stream")

    # -- text + extension endpoints -------------------------------------------

    @app.post("/api/search")
    async def post_search(request: Request):
        body = await request.json()
        result = prompt_search(project, registry, body["lens"], body["prompt"],
                               k=int(body.get("k", project.config.search_k)))
        return {
            "prompt": result.prompt, "lens": result.lens,
            "per_video_scores": result.per_video_scores,
            "highlighted": list(result.highlighted),
            "best_frame": {vid: list(key) for vid, key in result.best_frame.items()},
        }

    @app.get("/api/summarize/{video}/districts")
    def get_semantic_districts(video: str, lens: str = "semantic", seed: int = 0):
        ds = semantic_set(lens, project.asset(video).id, seed)
        return {
            "video_id": ds.video_id, "lens": lens, "k": ds.k,
            "wcss_curve": list(ds.wcss_curve),
            "districts": [
                {"id": d.id, "color_index": d.color_index,
                 "members": [list(m) for m in d.member_frames]}
                for d in ds.districts
            ],
            "landmarks": [
                {"district_id": lm.district_id, "anchor": list(lm.anchor_frame),
                 "thumbnail_ref": lm.thumbnail_ref}
                for lm in ds.landmarks
            ],
        }

    @app.post("/api/summarize")
    async def post_summarize(request: Request):
        body = await request.json()
        video_id = project.asset(str(body["video_id"])).id
        lens = body.get("lens", "semantic")
        seed = int(body.get("seed", 0))
        ds = semantic_set(lens, video_id, seed)
        order = body.get("landmark_order") or [d.id for d in ds.districts]
        cutlist = summarize(project, ds, order)
        return _cutlist_payload(
            CutList(lens=lens, segments=cutlist.segments), project)

    @app.post("/api/highlight")
    async def post_highlight(photo: UploadFile, lens: str = "semantic"):
        data = await photo.read()
        image = decode_image(data)
        result = find_highlight(project, registry, lens, image)
        return {
            "lens": result.lens,
            "nearest_frame": list(result.nearest_frame),
            "clip": {"start_s": result.clip_start_s, "end_s": result.clip_end_s},
            "neighbors": [
                {"frame": list(key), "distance": d} for key, d in result.neighbors
            ],
        }

    @app.post("/api/story")
    async def post_story(request: Request):
        body = await request.json()
        lens = body["lens"]
        sentences = [str(s) for s in body["sentences"]]
        order = match_story(project, registry, lens, sentences)
        route = chain_in_order(project, lens, order,
                               stride=project.config.street_stride)
        cutlist = route_to_cutlist(route, project,
                                   min_segment_s=project.config.min_segment_s)
        return {
            "order": order,
            "route": _route_payload(route),
            "cutlist": _cutlist_payload(cutlist, project),
        }

    return app


def serve(project_dir: str, bind_addr: str = "127.0.0.1:8080", *,
          provider_url: str | None = None, model_file: str | None = None,
          media: MediaTool | None = None) -> None:
    import uvicorn

    from videomap.build import build_registry
    from videomap.store import load_project

    project, lens_meta = load_project(project_dir)
    registry = build_registry(lens_meta, provider_url=provider_url,
                              model_file=model_file)
    app = create_app(project, registry, media=media, project_dir=project_dir)
    host, _, port = bind_addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
