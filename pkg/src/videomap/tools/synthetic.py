"""Procedural synthetic videos and the raw frame-sequence container.

Two tiny on-disk formats back the hermetic media tool:

* ``videomap-synthetic-v1`` — a JSON description of a video whose frames are
  generated procedurally (solid colors, gradients, a moving box). Fixture
  corpora stay a few hundred bytes and decode bit-identically everywhere.
* ``videomap-rawseq-v1`` — a one-line JSON header followed by raw RGB24
  frames; produced by the simulator's render verb and accepted back as input.

Frame synthesis uses integer/uint8 math (plus IEEE rounding for motion), so
repeated decodes are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

SYNTHETIC_FORMAT = "videomap-synthetic-v1"
RAWSEQ_FORMAT = "videomap-rawseq-v1"


@dataclass(frozen=True)
class ClipInfo:
    duration_s: float
    fps: float
    width: int
    height: int


def _lerp_colors(left, right, frac):
    """Per-column blend; frac is a float array in [0, 1]."""
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    cols = np.rint(left[None, :] + (right - left)[None, :] * frac[:, None])
    return cols.astype(np.uint8)


def _triangle(x: float) -> float:
    x = x % 1.0
    return 2.0 * x if x < 0.5 else 2.0 - 2.0 * x


def render_scene_frame(scene: dict, t: float, width: int, height: int) -> np.ndarray:
    kind = scene["kind"]
    if kind == "solid":
        frame = np.empty((height, width, 3), dtype=np.uint8)
        frame[:, :] = np.asarray(scene["color"], dtype=np.uint8)
        return frame
    if kind == "hgradient":
        pan = float(scene.get("pan_px_per_s", 0.0))
        shift = int(round(pan * t))
        x = (np.arange(width) + shift) % width
        frac = x / max(width - 1, 1)
        cols = _lerp_colors(scene["left"], scene["right"], frac)
        return np.repeat(cols[None, :, :], height, axis=0)
    if kind == "moving_box":
        frame = np.empty((height, width, 3), dtype=np.uint8)
        frame[:, :] = np.asarray(scene["bg"], dtype=np.uint8)
        side = max(2, int(round(float(scene.get("box_frac", 0.3)) * min(width, height))))
        speed = float(scene.get("speed", 0.1))
        tri = _triangle(t * speed)
        x0 = int(round(tri * (width - side)))
        y0 = (height - side) // 2
        frame[y0:y0 + side, x0:x0 + side] = np.asarray(scene["box"], dtype=np.uint8)
        return frame
    if kind == "checker":
        cell = int(scene.get("cell_px", 8))
        phase = int(round(t * float(scene.get("flips_per_s", 0.0))))
        yy, xx = np.mgrid[0:height, 0:width]
        mask = ((xx // cell + yy // cell + phase) % 2).astype(bool)
        frame = np.empty((height, width, 3), dtype=np.uint8)
        frame[:, :] = np.asarray(scene["a"], dtype=np.uint8)
        frame[mask] = np.asarray(scene["b"], dtype=np.uint8)
        return frame
    raise ValueError(f"unknown scene kind {kind!r}")


class SyntheticClip:
    """A procedural video: scenes laid out on a timeline."""

    def __init__(self, doc: dict):
        if doc.get("format") != SYNTHETIC_FORMAT:
            raise ValueError("not a synthetic clip document")
        self.width = int(doc["width"])
        self.height = int(doc["height"])
        self.fps = float(doc["fps"])
        self.duration_s = float(doc["duration_s"])
        self.scenes = list(doc["scenes"])
        if self.duration_s <= 0 or self.fps <= 0:
            raise ValueError("duration_s and fps must be positive")

    @property
    def info(self) -> ClipInfo:
        return ClipInfo(self.duration_s, self.fps, self.width, self.height)

    @property
    def native_frame_count(self) -> int:
        return max(1, int(round(self.duration_s * self.fps)))

    def _scene_at(self, t: float) -> dict:
        for scene in self.scenes:
            if t < float(scene["until_s"]):
                return scene
        return self.scenes[-1]

    def frame_at_index(self, n: int) -> np.ndarray:
        n = min(max(n, 0), self.native_frame_count - 1)
        t = n / self.fps
        return render_scene_frame(self._scene_at(t), t, self.width, self.height)

    def frame_at_time(self, t: float) -> np.ndarray:
        # nearest native frame, mirroring keyframe-snap decoding
        return self.frame_at_index(int(round(t * self.fps)))


def load_synthetic(path: str) -> SyntheticClip:
    with open(path, "r", encoding="utf-8") as fh:
        return SyntheticClip(json.load(fh))


def write_synthetic(path: str, *, width: int, height: int, fps: float,
                    duration_s: float, scenes: list[dict]) -> None:
    doc = {
        "format": SYNTHETIC_FORMAT,
        "width": width,
        "height": height,
        "fps": fps,
        "duration_s": duration_s,
        "scenes": scenes,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


class RawSequence:
    """Header-plus-raw-RGB24 container (the simulator's render output)."""

    def __init__(self, path: str, header: dict, data_offset: int):
        self.path = path
        self.width = int(header["width"])
        self.height = int(header["height"])
        self.fps = float(header["fps"])
        self.frame_count = int(header["frame_count"])
        self._offset = data_offset

    @property
    def duration_s(self) -> float:
        return self.frame_count / self.fps

    @property
    def info(self) -> ClipInfo:
        return ClipInfo(self.duration_s, self.fps, self.width, self.height)

    @property
    def frame_bytes(self) -> int:
        return self.width * self.height * 3

    def frame_at_index(self, n: int) -> np.ndarray:
        n = min(max(n, 0), self.frame_count - 1)
        with open(self.path, "rb") as fh:
            fh.seek(self._offset + n * self.frame_bytes)
            buf = fh.read(self.frame_bytes)
        if len(buf) != self.frame_bytes:
            raise ValueError("truncated raw sequence")
        return np.frombuffer(buf, dtype=np.uint8).reshape(self.height, self.width, 3)

    def frame_at_time(self, t: float) -> np.ndarray:
        return self.frame_at_index(int(round(t * self.fps)))


def open_rawseq(path: str) -> RawSequence:
    with open(path, "rb") as fh:
        line = fh.readline()
        offset = fh.tell()
    header = json.loads(line.decode("utf-8"))
    if header.get("format") != RAWSEQ_FORMAT:
        raise ValueError("not a raw sequence file")
    return RawSequence(path, header, offset)


def write_rawseq(path: str, frames, fps: float) -> None:
    frames = list(frames)
    if not frames:
        raise ValueError("raw sequence needs at least one frame")
    h, w, _ = frames[0].shape
    header = {
        "format": RAWSEQ_FORMAT,
        "width": w,
        "height": h,
        "fps": fps,
        "frame_count": len(frames),
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        fh.write(b"\n")
        for frame in frames:
            fh.write(np.ascontiguousarray(frame, dtype=np.uint8).tobytes())


def open_clip(path: str):
    """Open either container; raises ValueError when the file is neither."""
    with open(path, "rb") as fh:
        first = fh.readline()
    try:
        header = json.loads(first.decode("utf-8"))
        if isinstance(header, dict) and header.get("format") == RAWSEQ_FORMAT:
            return open_rawseq(path)
    except (UnicodeDecodeError, json.JSONDecodeError):
        pass
    try:
        return load_synthetic(path)
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise ValueError(f"cannot decode {path}: {exc}") from exc
