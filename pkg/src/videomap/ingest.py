"""Footage ingestion: decode, sample frames, thumbnail, catalog.

Sampling is uniform wall-clock: frames at t = k/rate for k = 0, 1, ... while
t < duration, so every video yields at least one frame and a trailing
partial interval yields none.
"""

from __future__ import annotations

import hashlib
import io
import os
import threading
from dataclasses import dataclass

import numpy as np
from PIL import Image

from videomap.errors import DuplicatePath, FrameNotFound, UndecodableFile, ZeroDurationVideo
from videomap.media import MediaInfo, MediaTool

THUMB_LONG_EDGE = 256
THUMB_QUALITY = 90


@dataclass(frozen=True)
class VideoAsset:
    id: str
    path: str
    duration_s: float
    fps: float
    frame_count: int  # sampled frames, not native
    width: int
    height: int


@dataclass(frozen=True)
class FrameRecord:
    video_id: str
    frame_index: int
    time_s: float
    thumbnail_ref: str


def sample_times(duration_s: float, rate_hz: float) -> list[float]:
    if duration_s <= 0:
        raise ZeroDurationVideo(f"duration {duration_s} s")
    if rate_hz <= 0:
        raise ValueError("sample rate must be positive")
    times = []
    k = 0
    while k / rate_hz < duration_s:
        times.append(k / rate_hz)
        k += 1
    return times


def thumbnail_bytes(frame: np.ndarray) -> bytes:
    """JPEG-encode a frame scaled down to a 256 px long edge (never upscaled)."""
    img = Image.fromarray(frame)
    long_edge = max(img.size)
    if long_edge > THUMB_LONG_EDGE:
        scale = THUMB_LONG_EDGE / long_edge
        img = img.resize(
            (max(1, round(img.width * scale)), max(1, round(img.height * scale))),
            Image.BILINEAR,
        )
    buf = io.BytesIO()
    img.save(buf, format="JPEG", quality=THUMB_QUALITY)
    return buf.getvalue()


def persist_thumbnail(project_dir: str, frame: np.ndarray) -> str:
    """Store a thumbnail under its content hash; returns the project-relative ref."""
    data = thumbnail_bytes(frame)
    digest = hashlib.sha256(data).hexdigest()[:16]
    ref = f"thumbs/{digest}.jpg"
    path = os.path.join(project_dir, ref)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    if not os.path.exists(path):  # content-addressed: identical frames dedupe
        with open(path, "wb") as fh:
            fh.write(data)
    return ref


def ingest_video(path: str, sample_rate_hz: float = 1.0, *,
                 asset_id: str | None = None,
                 project_dir: str | None = None,
                 media: MediaTool | None = None,
                 ) -> tuple[VideoAsset, list[FrameRecord], np.ndarray]:
    """Decode one file into an asset, its sampled frame records, and frame pixels.

    Returns (asset, frames, pixels) where pixels is (n, h, w, 3) uint8 in
    frame order. Thumbnails are persisted when project_dir is given.
    """
    media = media or MediaTool()
    info = media.probe(path)
    if info.duration_s <= 0:
        raise ZeroDurationVideo(path)
    times = sample_times(info.duration_s, sample_rate_hz)
    pixels = media.sample_frames(path, sample_rate_hz, info)
    if pixels.shape[0] < len(times):
        raise UndecodableFile(
            f"{path}: decoder returned {pixels.shape[0]} frames, expected {len(times)}")
    pixels = pixels[: len(times)]

    vid = asset_id or os.path.splitext(os.path.basename(path))[0]
    frames = []
    for k, t in enumerate(times):
        ref = persist_thumbnail(project_dir, pixels[k]) if project_dir else ""
        frames.append(FrameRecord(video_id=vid, frame_index=k, time_s=t, thumbnail_ref=ref))
    asset = VideoAsset(
        id=vid, path=path,
        duration_s=info.duration_s, fps=info.fps,
        frame_count=len(frames),
        width=info.width, height=info.height,
    )
    return asset, frames, pixels


class AssetCatalog:
    """Registration of ingested assets; serializes writes, enforces uniqueness."""

    def __init__(self):
        self._lock = threading.Lock()
        self._claimed: set[str] = set()
        self._paths: set[str] = set()
        self.assets: list[VideoAsset] = []
        self.frames: dict[str, list[FrameRecord]] = {}

    def claim_id(self, path: str) -> str:
        """Reserve a unique asset id derived from the file name.

        Called before decoding so parallel ingests of distinct files can
        stamp their FrameRecords up front.
        """
        with self._lock:
            if path in self._paths:
                raise DuplicatePath(path)
            self._paths.add(path)
            stem = os.path.splitext(os.path.basename(path))[0]
            taken = {a.id for a in self.assets} | self._claimed
            vid, n = stem, 2
            while vid in taken:
                vid = f"{stem}-{n}"
                n += 1
            self._claimed.add(vid)
            return vid

    def register(self, asset: VideoAsset, frames: list[FrameRecord]) -> None:
        with self._lock:
            if any(a.id == asset.id for a in self.assets):
                raise DuplicatePath(f"asset id {asset.id!r} already registered")
            if asset.path not in self._paths:
                if any(a.path == asset.path for a in self.assets):
                    raise DuplicatePath(asset.path)
                self._paths.add(asset.path)
            self.assets.append(asset)
            self.frames[asset.id] = list(frames)
            self._claimed.discard(asset.id)


def get_frame_image(asset: VideoAsset, frame: FrameRecord,
                    resolution: tuple[int, int] | None = None, *,
                    media: MediaTool | None = None) -> np.ndarray:
    """Re-decode a sampled frame from the source at native or requested size.

    Aspect ratio is not preserved: both axes scale to the requested size.
    """
    media = media or MediaTool()
    info = MediaInfo(asset.duration_s, asset.fps, asset.width, asset.height)
    pixels = media.decode_frame_at(asset.path, frame.time_s, info)
    if resolution is None or resolution == (asset.width, asset.height):
        return pixels
    w, h = resolution
    if w < 1 or h < 1:
        raise FrameNotFound(f"bad resolution {resolution}")
    img = Image.fromarray(pixels).resize((w, h), Image.BILINEAR)
    return np.asarray(img)
