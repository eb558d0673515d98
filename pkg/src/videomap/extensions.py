"""Extended applications: semantic districts, summaries, photo highlights.

A single video's frames are partitioned into semantic districts by k-means
(k picked with an elbow rule), each district gets a landmark, and selected
landmarks expand into fixed-length summary segments. A photo becomes a
custom landmark: embedded under a text/image lens, snapped to the nearest
frame over the whole corpus, and expanded into a 5 s clip.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from videomap.errors import (
    EmptySelection,
    LandmarkNotFound,
    TooFewPoints,
    UndecodableImage,
)
from videomap.lens import LensRegistry, embed_image
from videomap.mapmodel import (
    PALETTE_SIZE,
    District,
    Landmark,
    compute_landmark,
    cosine_distance,
)
from videomap.routing import CutList, CutSegment

if TYPE_CHECKING:
    from videomap.project import FrameKey, MapProject

MAX_K = 10
SUMMARY_SEGMENT_S = 3.0
HIGHLIGHT_CLIP_S = 5.0
LLOYD_MAX_ITERS = 300
SEEDS_PER_K = 3


@dataclass(frozen=True)
class KMeansResult:
    assignments: np.ndarray  # (N,) int
    centroids: np.ndarray    # (k, D) float64
    wcss: float
    wcss_history: tuple      # per-iteration cost, non-increasing


@dataclass(frozen=True)
class SemanticDistrictSet:
    video_id: str
    k: int
    districts: tuple  # of District, kind="semantic"
    landmarks: tuple  # one Landmark per district
    wcss_curve: tuple  # wcss for k = 1..k_max


@dataclass(frozen=True)
class HighlightResult:
    lens: str
    vector: np.ndarray
    thumbnail_jpeg: bytes
    nearest_frame: tuple  # (video_id, frame_index)
    clip_start_s: float
    clip_end_s: float
    neighbors: tuple  # ((video_id, frame_index), distance) x <= 10, nearest first


def _plus_plus_init(X: np.ndarray, k: int, rng: np.random.RandomState) -> np.ndarray:
    """k-means++ D^2 seeding."""
    n = X.shape[0]
    centroids = np.empty((k, X.shape[1]), dtype=np.float64)
    centroids[0] = X[rng.randint(n)]
    closest_sq = np.sum((X - centroids[0]) ** 2, axis=1)
    for c in range(1, k):
        total = closest_sq.sum()
        if total == 0.0:  # all points identical to chosen centers
            centroids[c] = X[rng.randint(n)]
            continue
        idx = rng.choice(n, p=closest_sq / total)
        centroids[c] = X[idx]
        closest_sq = np.minimum(closest_sq, np.sum((X - centroids[c]) ** 2, axis=1))
    return centroids


def _lloyd(X: np.ndarray, centroids: np.ndarray) -> KMeansResult:
    n, k = X.shape[0], centroids.shape[0]
    centroids = centroids.copy()
    assignments = np.full(n, -1, dtype=np.intp)
    history: list[float] = []

    for _ in range(LLOYD_MAX_ITERS):
        d2 = np.sum((X[:, None, :] - centroids[None, :, :]) ** 2, axis=2)
        new_assign = np.argmin(d2, axis=1)  # ties -> lowest cluster index
        history.append(float(d2[np.arange(n), new_assign].sum()))
        if np.array_equal(new_assign, assignments):
            break
        assignments = new_assign

        for c in range(k):
            members = assignments == c
            if members.any():
                centroids[c] = X[members].mean(axis=0)
        # Empty-cluster repair: hand each empty cluster the point currently
        # farthest from its own centroid. Removing a worst point and making
        # it a singleton can only lower the cost, so monotonicity survives.
        for c in range(k):
            if (assignments == c).any():
                continue
            dist_own = np.sum((X - centroids[assignments]) ** 2, axis=1)
            donor_counts = np.bincount(assignments, minlength=k)
            dist_own[donor_counts[assignments] <= 1] = -np.inf  # keep donors nonempty
            if not np.any(np.isfinite(dist_own)):
                continue  # every cluster is a singleton; nothing to steal
            p = int(np.argmax(dist_own))
            old = assignments[p]
            assignments[p] = c
            centroids[c] = X[p]
            still = assignments == old
            if still.any():
                centroids[old] = X[still].mean(axis=0)

    wcss = float(np.sum((X - centroids[assignments]) ** 2))
    return KMeansResult(assignments=assignments, centroids=centroids,
                        wcss=wcss, wcss_history=tuple(history))


def kmeans_cluster(vectors: np.ndarray, k: int, seed: int) -> KMeansResult:
    X = np.asarray(vectors, dtype=np.float64)
    if k < 1:
        raise ValueError("k must be >= 1")
    if X.ndim != 2 or X.shape[0] < k:
        raise TooFewPoints(f"{X.shape[0] if X.ndim == 2 else 0} points for k={k}")
    rng = np.random.RandomState(seed)
    return _lloyd(X, _plus_plus_init(X, k, rng))


def elbow_k(wcss_curve) -> int:
    """Knee of the curve: max perpendicular distance to the end-to-end chord.

    Curve entry i is wcss for k = i+1. Ties and degenerate (collinear,
    shorter-than-2) curves resolve to the smallest k.
    """
    curve = [float(w) for w in wcss_curve]
    k_max = len(curve)
    if k_max < 2:
        return 1
    x1, y1 = 1.0, curve[0]
    x2, y2 = float(k_max), curve[-1]
    span = np.hypot(x2 - x1, y2 - y1)
    if span == 0.0:
        return 1
    best_k, best_d = 1, -np.inf
    for i, y in enumerate(curve):
        x = float(i + 1)
        d = abs((y2 - y1) * x - (x2 - x1) * y + x2 * y1 - y2 * x1) / span
        if d > best_d:
            best_k, best_d = i + 1, d
    return best_k


def _k_max(n_frames: int) -> int:
    return min(MAX_K, n_frames // 10 + 1)


def _best_of_seeds(X: np.ndarray, k: int, seed: int,
                   prev: KMeansResult | None) -> KMeansResult:
    """Best of a few seeded runs; a warm start from the k-1 solution plus its
    worst-fit point guarantees the wcss curve never increases in k."""
    candidates = [kmeans_cluster(X, k, seed + r) for r in range(SEEDS_PER_K)]
    if prev is not None and k > 1:
        worst = int(np.argmax(np.sum((X - prev.centroids[prev.assignments]) ** 2, axis=1)))
        warm = np.vstack([prev.centroids, X[worst]])
        candidates.append(_lloyd(X, warm))
    return min(candidates, key=lambda r: r.wcss)


def build_semantic_districts(project: "MapProject", lens: str, video_id: str,
                             seed: int = 0) -> SemanticDistrictSet:
    """Partition one video's frames into k semantic districts, k by elbow."""
    records = project.frames[project.asset(video_id).id]
    vs = project.vector_set(lens)
    keys = [(video_id, fr.frame_index) for fr in records]
    X = vs.matrix[[vs.row_of(*key) for key in keys]].astype(np.float64)
    if X.shape[0] < 1:
        raise TooFewPoints(f"video {video_id!r} has no frames")

    curve: list[float] = []
    results: list[KMeansResult] = []
    prev = None
    for k in range(1, _k_max(X.shape[0]) + 1):
        res = _best_of_seeds(X, k, seed + 101 * k, prev)
        curve.append(res.wcss)
        results.append(res)
        prev = res

    k = elbow_k(curve)
    chosen = results[k - 1]
    districts = []
    landmarks = []
    for c in range(k):
        members = tuple(keys[i] for i in range(len(keys))
                        if chosen.assignments[i] == c)
        district = District(id=f"{video_id}/s{c}", member_frames=members,
                            color_index=c % PALETTE_SIZE, kind="semantic")
        districts.append(district)
        landmarks.append(compute_landmark(project, lens, district))
    return SemanticDistrictSet(video_id=video_id, k=k, districts=tuple(districts),
                               landmarks=tuple(landmarks), wcss_curve=tuple(curve))


def _window(center_s: float, length_s: float, duration_s: float) -> tuple[float, float]:
    """Fixed-length window centered on a time, shifted (not cut) into bounds."""
    if duration_s <= length_s:
        return 0.0, duration_s
    start = center_s - length_s / 2.0
    start = min(max(start, 0.0), duration_s - length_s)
    return start, start + length_s


def summarize(project: "MapProject", district_set: SemanticDistrictSet,
              selected_district_ids) -> CutList:
    """3 s forward segment per selected landmark, in the caller's order."""
    selected = list(selected_district_ids)
    if not selected:
        raise EmptySelection("no landmarks selected")
    by_id = {lm.district_id: lm for lm in district_set.landmarks}
    asset = project.asset(district_set.video_id)

    segments = []
    for did in selected:
        lm = by_id.get(did)
        if lm is None:
            raise LandmarkNotFound(did)
        anchor_t = project.frame(*lm.anchor_frame).time_s
        start, end = _window(anchor_t, SUMMARY_SEGMENT_S, asset.duration_s)
        segments.append(CutSegment(
            video_id=asset.id, entry_frame=lm.anchor_frame,
            exit_frame=lm.anchor_frame, entry_time_s=start, exit_time_s=end,
            direction="forward"))
    return CutList(lens="", segments=tuple(segments))


def decode_image(data: bytes) -> np.ndarray:
    from PIL import Image

    try:
        with Image.open(io.BytesIO(data)) as im:
            return np.asarray(im.convert("RGB"))
    except Exception as exc:
        raise UndecodableImage(str(exc)) from exc


def find_highlight(project: "MapProject", registry: LensRegistry, lens: str,
                   photo: np.ndarray) -> HighlightResult:
    """Snap a photo to its nearest frame anywhere on the map; cut a 5 s clip.

    The photo is a custom landmark with no district, so no same-video
    exclusion applies: the scan covers every usable frame.
    """
    from videomap.ingest import thumbnail_bytes

    vec = embed_image(registry, lens, photo).astype(np.float64)
    vs = project.vector_set(lens)
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        distances = np.ones(len(vs.keys))
    else:
        distances = 1.0 - vs.unit @ (vec / norm)

    ranked = [i for i in range(len(vs.keys)) if vs.usable[i]]
    ranked.sort(key=lambda i: distances[i])  # stable: ties by (video_id, frame)
    if not ranked:
        raise TooFewPoints("no usable frames in project")
    neighbors = tuple((vs.keys[i], float(np.clip(distances[i], 0.0, 2.0)))
                      for i in ranked[:10])

    vid, fi = neighbors[0][0]
    asset = project.asset(vid)
    center_t = project.frame(vid, fi).time_s
    start, end = _window(center_t, HIGHLIGHT_CLIP_S, asset.duration_s)
    return HighlightResult(lens=lens, vector=vec.astype(np.float32),
                           thumbnail_jpeg=thumbnail_bytes(photo),
                           nearest_frame=(vid, fi), clip_start_s=start,
                           clip_end_s=end, neighbors=neighbors)
