"""Navigational semantics over the map: districts, landmarks, paths, nodes.

Everything here reads the original 512-d vectors, never layout coordinates —
rearranging the map must not change any neighbor computation. Cosine distance
is the single metric: d(a, b) = 1 - dot(a, b) / (|a||b|), in [0, 2].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from videomap.errors import EmptyInput, MissingVectors

if TYPE_CHECKING:
    from videomap.project import FrameKey, MapProject

PALETTE_SIZE = 20  # distinguishable district colors; UI owns the actual palette
DEFAULT_K = 10


@dataclass(frozen=True)
class District:
    id: str
    member_frames: tuple  # of (video_id, frame_index)
    color_index: int
    kind: str  # "per-video" | "semantic"


@dataclass(frozen=True)
class Landmark:
    district_id: str
    anchor_frame: tuple  # (video_id, frame_index)
    thumbnail_ref: str


@dataclass(frozen=True)
class TransitionEdge:
    lens: str
    from_frame: tuple
    to_frame: tuple
    distance: float


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 1.0  # undefined direction; maximally uninformative
    return float(np.clip(1.0 - np.dot(a, b) / (na * nb), 0.0, 2.0))


def build_districts(project: "MapProject", lens: str) -> list[District]:
    """One district per video; palette slot = ingest order mod palette size."""
    districts = []
    for i, vid in enumerate(project.video_order):
        members = tuple((vid, fr.frame_index) for fr in project.frames[vid])
        districts.append(District(
            id=vid, member_frames=members, color_index=i % PALETTE_SIZE,
            kind="per-video"))
    return districts


def compute_landmark(project: "MapProject", lens: str, district: District) -> Landmark:
    """Anchor = member closest (cosine) to the mean of member vectors.

    The centroid lives in 512-d embedding space, so landmarks are invariant
    under any 2D layout change. Exact distance ties go to the earliest
    (video_id, frame_index).
    """
    if not district.member_frames:
        raise EmptyInput(f"district {district.id!r} has no members")
    vs = project.vector_set(lens)
    try:
        rows = [vs.row_of(vid, fi) for vid, fi in district.member_frames]
    except Exception:
        raise MissingVectors(
            f"district {district.id!r} has members without {lens} vectors") from None
    centroid = vs.matrix[rows].astype(np.float64).mean(axis=0)

    best_key, best_d = None, np.inf
    for (vid, fi), row in zip(district.member_frames, rows):
        d = cosine_distance(vs.matrix[row], centroid)
        if d < best_d or (d == best_d and best_key is not None and (vid, fi) < best_key):
            best_key, best_d = (vid, fi), d
    record = project.frame(*best_key)
    return Landmark(district_id=district.id, anchor_frame=best_key,
                    thumbnail_ref=record.thumbnail_ref)


def nearest_paths(project: "MapProject", lens: str, query_frame: "FrameKey",
                  k: int = DEFAULT_K) -> list[TransitionEdge]:
    """k best cross-video transitions from one frame, ascending by distance.

    Exhaustive scan over the lens matrix; same-video frames are never
    eligible, ties sort by (video_id, frame_index). Zero-norm rows are
    excluded (cosine undefined there).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    vs = project.vector_set(lens)
    qrow = vs.row_of(*query_frame)
    if not vs.usable[qrow]:
        raise MissingVectors(f"frame {query_frame} has a zero-norm {lens} vector")

    distances = 1.0 - vs.unit @ vs.unit[qrow]
    qvid = query_frame[0]
    eligible = [i for i, (vid, _) in enumerate(vs.keys)
                if vid != qvid and vs.usable[i]]
    # vs.keys is (video_id, frame_index)-sorted, so a stable sort on distance
    # gives exactly the documented tie order.
    eligible.sort(key=lambda i: distances[i])

    edges = []
    for i in eligible[:k]:
        edges.append(TransitionEdge(
            lens=lens, from_frame=tuple(query_frame), to_frame=vs.keys[i],
            distance=float(np.clip(distances[i], 0.0, 2.0))))
    return edges


def format_timecode(time_s: float) -> str:
    ms = int(round(time_s * 1000.0))
    h, rem = divmod(ms, 3_600_000)
    m, rem = divmod(rem, 60_000)
    s, ms = divmod(rem, 1000)
    return f"{h:02d}:{m:02d}:{s:02d}.{ms:03d}"


def node_details(project: "MapProject", frame: "FrameKey") -> dict:
    import os

    vid, fi = frame
    record = project.frame(vid, fi)
    asset = project.asset(vid)
    return {
        "thumbnail_ref": record.thumbnail_ref,
        "filename": os.path.basename(asset.path),
        "timecode": format_timecode(record.time_s),
    }
