"""Project persistence: canonical JSON manifest + binary vector sidecars.

Layout of a project directory:

    manifest.json          canonical JSON (sorted keys, shortest-float repr)
    vectors_<lens>.bin     one sidecar per lens
    thumbs/<hash>.jpg      content-addressed frame thumbnails
    .videomap.lock         writer lock

Sidecar format (all little-endian):

    magic   4 bytes  b"VMAP"
    version u16      currently 1
    dims    u16
    count   u32
    nlen    u16      lens name length
    name    nlen bytes UTF-8
    data    count * dims float32, rows in (video_id, frame_index) order

Saving the same project twice yields byte-identical files; vectors round-trip
bitwise. Writes go to temp files and are renamed into place, so a crash never
leaves a corrupt project behind.
"""

from __future__ import annotations

import json
import os
import struct

import numpy as np
from filelock import FileLock

from videomap.errors import (
    CorruptManifest,
    MagicMismatch,
    TruncatedSidecar,
    UnsupportedVersion,
)
from videomap.ingest import FrameRecord, VideoAsset
from videomap.lens import LensId
from videomap.mapmodel import District, Landmark
from videomap.project import SCHEMA_VERSION, MapProject, ProjectConfig
from videomap.projection import MapPoint2D, TsneConfig
from videomap.canon import canonical_dumps

MAGIC = b"VMAP"
SIDECAR_VERSION = 1
MANIFEST_NAME = "manifest.json"
LOCK_NAME = ".videomap.lock"

_HEADER = struct.Struct("<HHIH")  # version, dims, count, name length


def sidecar_name(lens: str) -> str:
    return f"vectors_{lens}.bin"


def write_sidecar(path: str, lens: str, matrix: np.ndarray) -> None:
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    name = lens.encode("utf-8")
    blob = (MAGIC
            + _HEADER.pack(SIDECAR_VERSION, matrix.shape[1], matrix.shape[0], len(name))
            + name + matrix.tobytes())
    _atomic_write(path, blob)


def read_sidecar(path: str, expect_lens: str) -> np.ndarray:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except FileNotFoundError:
        raise CorruptManifest(f"manifest references missing sidecar {path}") from None
    if blob[:4] != MAGIC:
        raise MagicMismatch(f"{path}: bad magic {blob[:4]!r}")
    if len(blob) < 4 + _HEADER.size:
        raise TruncatedSidecar(f"{path}: header incomplete")
    version, dims, count, nlen = _HEADER.unpack_from(blob, 4)
    if version != SIDECAR_VERSION:
        raise UnsupportedVersion(f"{path}: sidecar version {version}")
    off = 4 + _HEADER.size
    name = blob[off:off + nlen].decode("utf-8")
    if name != expect_lens:
        raise CorruptManifest(f"{path}: sidecar is for lens {name!r}, not {expect_lens!r}")
    body = blob[off + nlen:]
    want = count * dims * 4
    if len(body) < want:
        raise TruncatedSidecar(f"{path}: want {want} data bytes, have {len(body)}")
    return np.frombuffer(body[:want], dtype="<f4").reshape(count, dims).copy()


def _atomic_write(path: str, data: bytes) -> None:
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def project_lock(project_dir: str) -> FileLock:
    return FileLock(os.path.join(project_dir, LOCK_NAME))


def _manifest_payload(project: MapProject, lens_meta: dict[str, LensId]) -> dict:
    cfg = project.config
    manifest = {
        "schema_version": project.schema_version,
        "config": {
            "sample_rate_hz": cfg.sample_rate_hz,
            "tsne": {
                "perplexity": cfg.tsne.perplexity,
                "iterations": cfg.tsne.iterations,
                "learning_rate": cfg.tsne.learning_rate,
                "seed": cfg.tsne.seed,
            },
            "spacing_fraction": cfg.spacing_fraction,
            "paths_k": cfg.paths_k,
            "search_k": cfg.search_k,
            "min_segment_s": cfg.min_segment_s,
            "street_stride": cfg.street_stride,
        },
        "assets": [
            {
                "id": a.id, "path": a.path, "duration_s": a.duration_s,
                "fps": a.fps, "frame_count": a.frame_count,
                "width": a.width, "height": a.height,
            }
            for a in project.assets.values()  # array keeps ingest order
        ],
        "frames": {
            vid: [
                {"frame_index": fr.frame_index, "time_s": fr.time_s,
                 "thumbnail_ref": fr.thumbnail_ref}
                for fr in records
            ]
            for vid, records in project.frames.items()
        },
        "lenses": {},
        "layouts": {},
        "districts": {},
        "landmarks": {},
    }
    for lens, vs in project.vectors.items():
        meta = lens_meta.get(lens)
        manifest["lenses"][lens] = {
            "dims": vs.dims,
            "supports_text": bool(meta.supports_text) if meta else False,
            "sidecar": sidecar_name(lens),
            "keys": [[vid, fi] for vid, fi in vs.keys],
        }
    for lens, points in project.layouts.items():
        manifest["layouts"][lens] = [
            {"video_id": p.video_id, "frame_index": p.frame_index,
             "raw_xy": list(p.raw_xy), "display_xy": list(p.display_xy)}
            for p in points
        ]
    for lens, districts in project.districts.items():
        manifest["districts"][lens] = [
            {"id": d.id, "members": [list(m) for m in d.member_frames],
             "color_index": d.color_index, "kind": d.kind}
            for d in districts
        ]
    for lens, landmarks in project.landmarks.items():
        manifest["landmarks"][lens] = [
            {"district_id": lm.district_id, "anchor": list(lm.anchor_frame),
             "thumbnail_ref": lm.thumbnail_ref}
            for lm in landmarks
        ]
    return manifest


def save_project(project: MapProject, project_dir: str,
                 lens_meta: dict[str, LensId] | None = None) -> None:
    os.makedirs(project_dir, exist_ok=True)
    with project_lock(project_dir):
        # Sidecars land before the manifest that references them.
        for lens, vs in project.vectors.items():
            write_sidecar(os.path.join(project_dir, sidecar_name(lens)), lens, vs.matrix)
        payload = _manifest_payload(project, lens_meta or {})
        _atomic_write(os.path.join(project_dir, MANIFEST_NAME),
                      canonical_dumps(payload).encode("utf-8") + b"\n")


def load_project(project_dir: str) -> tuple[MapProject, dict[str, LensId]]:
    manifest_path = os.path.join(project_dir, MANIFEST_NAME)
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        raise CorruptManifest(f"no manifest at {manifest_path}") from None
    except json.JSONDecodeError as exc:
        raise CorruptManifest(f"{manifest_path}: {exc}") from exc

    version = manifest.get("schema_version")
    if version != SCHEMA_VERSION:
        raise UnsupportedVersion(f"schema_version {version!r}")

    try:
        c = manifest["config"]
        config = ProjectConfig(
            sample_rate_hz=c["sample_rate_hz"],
            tsne=TsneConfig(**c["tsne"]),
            spacing_fraction=c["spacing_fraction"],
            paths_k=c["paths_k"], search_k=c["search_k"],
            min_segment_s=c["min_segment_s"], street_stride=c["street_stride"])
        project = MapProject(config)
        for a in manifest["assets"]:
            asset = VideoAsset(id=a["id"], path=a["path"], duration_s=a["duration_s"],
                               fps=a["fps"], frame_count=a["frame_count"],
                               width=a["width"], height=a["height"])
            records = [FrameRecord(video_id=a["id"], frame_index=fr["frame_index"],
                                   time_s=fr["time_s"], thumbnail_ref=fr["thumbnail_ref"])
                       for fr in manifest["frames"][a["id"]]]
            project.add_asset(asset, records)

        lens_meta: dict[str, LensId] = {}
        for lens, entry in manifest["lenses"].items():
            matrix = read_sidecar(os.path.join(project_dir, entry["sidecar"]), lens)
            keys = [(vid, int(fi)) for vid, fi in entry["keys"]]
            if matrix.shape != (len(keys), entry["dims"]):
                raise CorruptManifest(
                    f"lens {lens!r}: sidecar shape {matrix.shape} does not match manifest")
            project.set_vectors(lens, keys, matrix)
            lens_meta[lens] = LensId(lens, entry["dims"], entry["supports_text"])

        for lens, pts in manifest.get("layouts", {}).items():
            project.layouts[lens] = [
                MapPoint2D(lens=lens, video_id=p["video_id"],
                           frame_index=p["frame_index"],
                           raw_xy=tuple(p["raw_xy"]), display_xy=tuple(p["display_xy"]))
                for p in pts
            ]
        for lens, ds in manifest.get("districts", {}).items():
            project.districts[lens] = [
                District(id=d["id"],
                         member_frames=tuple((m[0], int(m[1])) for m in d["members"]),
                         color_index=d["color_index"], kind=d["kind"])
                for d in ds
            ]
        for lens, lms in manifest.get("landmarks", {}).items():
            project.landmarks[lens] = [
                Landmark(district_id=lm["district_id"],
                         anchor_frame=(lm["anchor"][0], int(lm["anchor"][1])),
                         thumbnail_ref=lm["thumbnail_ref"])
                for lm in lms
            ]
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptManifest(f"manifest field error: {exc}") from exc
    return project, lens_meta
