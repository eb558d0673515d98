"""Streets, routes, and cut lists.

A street is the single best transition (smallest cosine distance over all
cross-video frame pairs) between two videos. Route planning is the shortest
Hamiltonian path over street weights with free endpoints, solved exactly by
bitmask dynamic programming — hence the hard cap of 20 videos per route.
Story editing reuses the street weights but fixes the visiting order.

Cut lists pin the transition frames exactly (that is what makes the cut a
match cut) and pad segments to a minimum watchable length by extending away
from pinned ends; a segment pinned at both ends is never stretched.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import TYPE_CHECKING, Callable

import numpy as np

from videomap.canon import canonical_dumps
from videomap.errors import (
    DuplicateVideo,
    MissingStreet,
    TooFewVideos,
    TooManyVideos,
    UnknownVideo,
)
from videomap.mapmodel import TransitionEdge

if TYPE_CHECKING:
    from videomap.project import MapProject

MAX_ROUTE_VIDEOS = 20
DEFAULT_MIN_SEGMENT_S = 2.0

# Relative tolerance when comparing path costs during tie-break
# reconstruction; dp sums and prefix sums associate differently.
_COST_RTOL = 1e-12


@dataclass(frozen=True)
class Street:
    lens: str
    video_a: str  # lexicographically smaller id
    video_b: str
    best_edge: TransitionEdge  # oriented video_a -> video_b
    weight: float


@dataclass(frozen=True)
class Route:
    lens: str
    order: tuple
    transitions: tuple  # of TransitionEdge, oriented along traversal
    total_weight: float


@dataclass(frozen=True)
class CutSegment:
    video_id: str
    entry_frame: tuple  # (video_id, frame_index); informational for pinned ends
    exit_frame: tuple
    entry_time_s: float
    exit_time_s: float
    direction: str  # "forward" | "reverse"

    @property
    def duration_s(self) -> float:
        return abs(self.exit_time_s - self.entry_time_s)


@dataclass(frozen=True)
class CutList:
    lens: str
    segments: tuple

    @property
    def total_duration_s(self) -> float:
        return sum(seg.duration_s for seg in self.segments)


def _check_videos(project: "MapProject", video_ids) -> list[str]:
    seen = set()
    out = []
    for vid in video_ids:
        project.asset(vid)  # raises UnknownVideo
        if vid in seen:
            raise DuplicateVideo(vid)
        seen.add(vid)
        out.append(vid)
    return out


def _video_rows(vs, video_id: str, stride: int) -> list[int]:
    rows = [i for i, (vid, _) in enumerate(vs.keys) if vid == video_id]
    return rows[::stride]


def _best_pair(vs, rows_a: list[int], rows_b: list[int]) -> tuple[int, int, float]:
    """Indices into rows_a/rows_b of the min-distance pair, first-occurrence ties.

    Rows are frame-index sorted, so np.argmin over the C-ordered distance
    matrix lands on the lexicographically smallest (frame_a, frame_b).
    """
    D = 1.0 - vs.unit[rows_a] @ vs.unit[rows_b].T
    usable = np.outer(vs.usable[rows_a], vs.usable[rows_b])
    D = np.where(usable, D, np.inf)
    flat = int(np.argmin(D))
    ia, ib = divmod(flat, D.shape[1])
    return ia, ib, float(np.clip(D[ia, ib], 0.0, 2.0))


def street_for_pair(project: "MapProject", lens: str, video_a: str, video_b: str,
                    stride: int = 1) -> Street:
    a, b = sorted((video_a, video_b))
    vs = project.vector_set(lens)
    rows_a = _video_rows(vs, a, stride)
    rows_b = _video_rows(vs, b, stride)
    if not rows_a or not rows_b:
        raise MissingStreet(f"no usable frames for pair ({a}, {b})")
    ia, ib, dist = _best_pair(vs, rows_a, rows_b)
    edge = TransitionEdge(lens=lens, from_frame=vs.keys[rows_a[ia]],
                          to_frame=vs.keys[rows_b[ib]], distance=dist)
    return Street(lens=lens, video_a=a, video_b=b, best_edge=edge, weight=dist)


def build_streets(project: "MapProject", lens: str, video_ids,
                  stride: int = 1) -> list[Street]:
    """One street per unordered pair: C(n, 2) exhaustive best-frame scans."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    vids = _check_videos(project, video_ids)
    if len(vids) < 2:
        raise TooFewVideos(f"need >= 2 videos, got {len(vids)}")
    return [street_for_pair(project, lens, a, b, stride)
            for a, b in combinations(sorted(vids), 2)]


def _street_index(streets) -> dict:
    return {(s.video_a, s.video_b): s for s in streets}


def _lookup(index: dict, a: str, b: str) -> Street:
    street = index.get((a, b) if a < b else (b, a))
    if street is None:
        raise MissingStreet(f"no street between {a!r} and {b!r}")
    return street


def _oriented_edge(street: Street, from_video: str) -> TransitionEdge:
    e = street.best_edge
    if e.from_frame[0] == from_video:
        return e
    return TransitionEdge(lens=e.lens, from_frame=e.to_frame,
                          to_frame=e.from_frame, distance=e.distance)


def plan_route(streets, video_ids, lens: str | None = None,
               cancel: Callable[[], None] | None = None) -> Route:
    """Minimum-weight Hamiltonian path, free endpoints, exact bitmask DP.

    dp[mask][j] = cheapest path visiting exactly the videos in mask, ending
    at j. Because streets are undirected, dp[full][j] is also the cheapest
    path *starting* at j, which lets the tie-break walk pick the
    lexicographically smallest optimal order greedily. `cancel` (if given)
    is invoked periodically and may raise to abort a long plan.
    """
    ids = list(video_ids)
    vids = sorted(set(ids))
    n = len(vids)
    if n != len(ids):
        raise DuplicateVideo("route video set contains duplicates")
    if n < 2:
        raise TooFewVideos(f"need >= 2 videos, got {n}")
    if n > MAX_ROUTE_VIDEOS:
        raise TooManyVideos(f"{n} videos exceeds DP bound of {MAX_ROUTE_VIDEOS}")

    index = _street_index(streets)
    if lens is None:
        lens = next(iter(index.values())).lens if index else ""
    W = np.empty((n, n), dtype=np.float64)
    for i, j in combinations(range(n), 2):
        W[i, j] = W[j, i] = _lookup(index, vids[i], vids[j]).weight
    np.fill_diagonal(W, np.inf)

    full = (1 << n) - 1
    dp = np.full((full + 1, n), np.inf)
    for j in range(n):
        dp[1 << j, j] = 0.0

    for mask in range(1, full + 1):
        if cancel is not None and mask % 4096 == 0:
            cancel()
        ends = dp[mask]
        if not np.any(np.isfinite(ends)):
            continue
        best = np.min(ends[:, None] + W, axis=0)  # relax every successor at once
        for j in range(n):
            if not mask >> j & 1:
                nxt = mask | (1 << j)
                if best[j] < dp[nxt, j]:
                    dp[nxt, j] = best[j]

    total = float(np.min(dp[full]))

    def close_enough(cost: float) -> bool:
        return abs(cost - total) <= _COST_RTOL * max(1.0, abs(total))

    # Greedy lexicographic reconstruction: extend the prefix with the
    # smallest vertex that still admits an optimal completion.
    order_idx: list[int] = []
    mask, prefix_cost, prev = full, 0.0, None
    while mask:
        for j in range(n):
            if not mask >> j & 1:
                continue
            step = 0.0 if prev is None else float(W[prev, j])
            if close_enough(prefix_cost + step + dp[mask, j]):
                order_idx.append(j)
                prefix_cost += step
                mask &= ~(1 << j)
                prev = j
                break
        else:  # numerically unreachable; fall back to any optimal end
            j = int(np.argmin(dp[mask]))
            order_idx.append(j)
            prefix_cost += 0.0 if prev is None else float(W[prev, j])
            mask &= ~(1 << j)
            prev = j

    order = tuple(vids[j] for j in order_idx)
    transitions = tuple(
        _oriented_edge(_lookup(index, order[i], order[i + 1]), order[i])
        for i in range(n - 1))
    return Route(lens=lens, order=order, transitions=transitions,
                 total_weight=float(sum(t.distance for t in transitions)))


def chain_in_order(project: "MapProject", lens: str, ordered_video_ids,
                   stride: int = 1) -> Route:
    """Fixed-order route: the story dictates the sequence, streets the cuts."""
    vids = _check_videos(project, ordered_video_ids)
    if len(vids) < 2:
        raise TooFewVideos(f"need >= 2 videos, got {len(vids)}")
    transitions = []
    for a, b in zip(vids, vids[1:]):
        street = street_for_pair(project, lens, a, b, stride)
        transitions.append(_oriented_edge(street, a))
    return Route(lens=lens, order=tuple(vids), transitions=tuple(transitions),
                 total_weight=float(sum(t.distance for t in transitions)))


def _frame_time(project: "MapProject", frame: tuple) -> float:
    return project.frame(*frame).time_s


def _pad_one_pinned(pin_t: float, free_natural: float, duration: float,
                    min_s: float, pinned_is_exit: bool) -> tuple[float, float]:
    """Segment with one pinned transition end and one free end.

    The free end starts at its natural position (video start or end). If the
    natural side is shorter than min_s, play the other side of the pin
    instead — reversed — so the pinned frame stays exactly at the cut.
    Returns (entry_time, exit_time); direction falls out of their order.
    """
    natural_len = abs(pin_t - free_natural)
    if natural_len >= min_s:
        free_t = free_natural
    else:
        # Flip sides: the opposite side of the pin, clamped to the video.
        if pinned_is_exit:
            flipped = min(duration, pin_t + min_s)
        else:
            flipped = max(0.0, pin_t - min_s)
        free_t = flipped if abs(pin_t - flipped) > natural_len else free_natural
    return (free_t, pin_t) if pinned_is_exit else (pin_t, free_t)


def route_to_cutlist(route: Route, project: "MapProject",
                     min_segment_s: float = DEFAULT_MIN_SEGMENT_S) -> CutList:
    """Expand a route into playable segments around its pinned transitions.

    First segment: video start -> outgoing frame. Middle: incoming ->
    outgoing, reversed when the incoming time is later. Last: incoming ->
    video end. Short one-pinned segments flip to the pin's other side;
    both-pinned (middle) segments are left as-is since neither cut frame
    may move.
    """
    order = route.order
    segments = []
    for i, vid in enumerate(order):
        asset = project.asset(vid)
        incoming = route.transitions[i - 1].to_frame if i > 0 else None
        outgoing = route.transitions[i].from_frame if i < len(order) - 1 else None

        if incoming is None and outgoing is None:  # single-video route
            n = len(project.frames[vid])
            entry_f, exit_f = (vid, 0), (vid, n - 1)
            entry_t, exit_t = 0.0, asset.duration_s
        elif incoming is None:
            exit_t = _frame_time(project, outgoing)
            entry_t, exit_t = _pad_one_pinned(exit_t, 0.0, asset.duration_s,
                                              min_segment_s, pinned_is_exit=True)
            entry_f, exit_f = (vid, 0), outgoing
        elif outgoing is None:
            entry_t = _frame_time(project, incoming)
            entry_t, exit_t = _pad_one_pinned(entry_t, asset.duration_s,
                                              asset.duration_s, min_segment_s,
                                              pinned_is_exit=False)
            entry_f, exit_f = incoming, (vid, len(project.frames[vid]) - 1)
        else:
            entry_t = _frame_time(project, incoming)
            exit_t = _frame_time(project, outgoing)
            entry_f, exit_f = incoming, outgoing

        segments.append(CutSegment(
            video_id=vid, entry_frame=entry_f, exit_frame=exit_f,
            entry_time_s=float(entry_t), exit_time_s=float(exit_t),
            direction="reverse" if entry_t > exit_t else "forward"))
    return CutList(lens=route.lens, segments=tuple(segments))


def cutlist_to_json(cutlist: CutList, project: "MapProject") -> str:
    payload = {
        "version": 1,
        "lens": cutlist.lens,
        "segments": [
            {
                "video_id": seg.video_id,
                "source_path": project.asset(seg.video_id).path,
                "entry_time_s": seg.entry_time_s,
                "exit_time_s": seg.exit_time_s,
                "direction": seg.direction,
            }
            for seg in cutlist.segments
        ],
    }
    return canonical_dumps(payload)
