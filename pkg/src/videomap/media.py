"""Subprocess adapter for the external media-processing executable.

Decoding and rendering are delegated to a tool on the media protocol
(probe/frames/frame/render); the engine only consumes raw RGB24 buffers.
The tool path comes from, in order: an explicit argument, the
``VIDEOMAP_MEDIA_BIN`` environment variable, or ``videomap-media-ffmpeg``
on PATH. Paths ending in ``.py`` are run through the current interpreter,
which keeps test and demo setups independent of installed console scripts.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
from dataclasses import dataclass

import numpy as np

from videomap.errors import UndecodableFile

MEDIA_BIN_ENV = "VIDEOMAP_MEDIA_BIN"
DEFAULT_MEDIA_BIN = "videomap-media-ffmpeg"


@dataclass(frozen=True)
class MediaInfo:
    duration_s: float
    fps: float
    width: int
    height: int


def resolve_media_bin(explicit: str | None = None) -> str:
    return explicit or os.environ.get(MEDIA_BIN_ENV) or DEFAULT_MEDIA_BIN


class MediaTool:
    """Client for one media executable."""

    def __init__(self, bin_path: str | None = None):
        self.bin_path = resolve_media_bin(bin_path)

    def _argv(self, *args: str) -> list[str]:
        if self.bin_path.endswith(".py"):
            return [sys.executable, self.bin_path, *args]
        return [self.bin_path, *args]

    def _run(self, *args: str) -> bytes:
        try:
            proc = subprocess.run(self._argv(*args), capture_output=True)
        except OSError as exc:
            raise UndecodableFile(f"media tool {self.bin_path!r} not runnable: {exc}") from exc
        if proc.returncode != 0:
            detail = proc.stderr.decode("utf-8", "replace").strip()
            raise UndecodableFile(f"media tool failed ({' '.join(args[:2])}): {detail}")
        return proc.stdout

    def probe(self, path: str) -> MediaInfo:
        out = self._run("probe", path)
        try:
            doc = json.loads(out.decode("utf-8"))
            return MediaInfo(
                duration_s=float(doc["duration_s"]),
                fps=float(doc["fps"]),
                width=int(doc["width"]),
                height=int(doc["height"]),
            )
        except (ValueError, KeyError) as exc:
            raise UndecodableFile(f"bad probe output for {path}: {exc}") from exc

    def sample_frames(self, path: str, rate: float, info: MediaInfo) -> np.ndarray:
        """All frames at t = k/rate while t < duration, as (n, h, w, 3) uint8."""
        raw = self._run("frames", path, "--rate", repr(rate))
        frame_bytes = info.width * info.height * 3
        if frame_bytes == 0 or len(raw) % frame_bytes != 0:
            raise UndecodableFile(f"frame stream from {path} is not a whole number of frames")
        n = len(raw) // frame_bytes
        if n == 0:
            raise UndecodableFile(f"decoder produced no frames for {path}")
        return np.frombuffer(raw, dtype=np.uint8).reshape(n, info.height, info.width, 3)

    def decode_frame_at(self, path: str, t: float, info: MediaInfo) -> np.ndarray:
        raw = self._run("frame", path, "--at", repr(t))
        frame_bytes = info.width * info.height * 3
        if len(raw) != frame_bytes:
            raise UndecodableFile(f"expected {frame_bytes} bytes for one frame, got {len(raw)}")
        return np.frombuffer(raw, dtype=np.uint8).reshape(info.height, info.width, 3)

    def render(self, cutlist_path: str, out_path: str) -> None:
        self._run("render", cutlist_path, out_path)


def sim_tool_path() -> str:
    """Path to the bundled hermetic media tool (usable as VIDEOMAP_MEDIA_BIN)."""
    from videomap.tools import mediasim
    return mediasim.__file__
