"""In-memory project snapshot: assets, frames, per-lens vectors and layouts.

A MapProject is immutable once built (the store round-trips it); every read
path in mapmodel/routing/search/extensions works off this snapshot. Vectors
are float32 at rest but all distance math happens on float64 copies held by
VectorSet.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from videomap.errors import (
    DimensionMismatch,
    FrameNotFound,
    LensNotFound,
    MissingVectors,
    UnknownVideo,
)
from videomap.ingest import FrameRecord, VideoAsset
from videomap.projection import DEFAULT_SPACING_FRACTION, MapPoint2D, TsneConfig

if TYPE_CHECKING:
    from videomap.mapmodel import District, Landmark

SCHEMA_VERSION = 1

FrameKey = tuple[str, int]


@dataclass(frozen=True)
class ProjectConfig:
    sample_rate_hz: float = 1.0
    tsne: TsneConfig = field(default_factory=TsneConfig)
    spacing_fraction: float = DEFAULT_SPACING_FRACTION
    paths_k: int = 10
    search_k: int = 5
    min_segment_s: float = 2.0
    street_stride: int = 1


class VectorSet:
    """One lens's vectors for every frame, rows sorted by (video_id, frame_index)."""

    def __init__(self, lens: str, keys: list[FrameKey], matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=np.float32)
        if matrix.ndim != 2 or matrix.shape[0] != len(keys):
            raise DimensionMismatch(
                f"matrix shape {matrix.shape} does not match {len(keys)} keys")
        order = sorted(range(len(keys)), key=lambda i: keys[i])
        self.lens = lens
        self.keys: list[FrameKey] = [keys[i] for i in order]
        self.matrix = matrix[order]
        self.dims = int(matrix.shape[1])
        self._row = {k: i for i, k in enumerate(self.keys)}
        if len(self._row) != len(self.keys):
            raise DimensionMismatch("duplicate (video_id, frame_index) keys")
        self._unit: np.ndarray | None = None
        self._usable: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.keys)

    def row_of(self, video_id: str, frame_index: int) -> int:
        try:
            return self._row[(video_id, frame_index)]
        except KeyError:
            raise FrameNotFound(f"({video_id}, {frame_index}) has no {self.lens} vector") from None

    def vector(self, video_id: str, frame_index: int) -> np.ndarray:
        return self.matrix[self.row_of(video_id, frame_index)].astype(np.float64)

    @property
    def unit(self) -> np.ndarray:
        """float64 L2-normalized rows; zero-norm rows become zero rows."""
        if self._unit is None:
            m = self.matrix.astype(np.float64)
            norms = np.linalg.norm(m, axis=1)
            self._usable = norms > 0.0
            safe = np.where(self._usable, norms, 1.0)
            self._unit = m / safe[:, None]
        return self._unit

    @property
    def usable(self) -> np.ndarray:
        """Mask of rows with nonzero norm (cosine distance defined)."""
        _ = self.unit
        return self._usable


class MapProject:
    def __init__(self, config: ProjectConfig | None = None):
        self.schema_version = SCHEMA_VERSION
        self.config = config or ProjectConfig()
        self.assets: dict[str, VideoAsset] = {}          # insertion = ingest order
        self.frames: dict[str, list[FrameRecord]] = {}
        self.vectors: dict[str, VectorSet] = {}
        self.layouts: dict[str, list[MapPoint2D]] = {}
        self.districts: dict[str, list["District"]] = {}
        self.landmarks: dict[str, list["Landmark"]] = {}

    # -- construction -----------------------------------------------------

    def add_asset(self, asset: VideoAsset, frames: list[FrameRecord]) -> None:
        if asset.id in self.assets:
            raise UnknownVideo(f"asset id {asset.id!r} already present")
        self.assets[asset.id] = asset
        self.frames[asset.id] = list(frames)

    def set_vectors(self, lens: str, keys: list[FrameKey], matrix: np.ndarray) -> None:
        for vid, fi in keys:
            self.frame(vid, fi)  # every vector must reference a real frame
        self.vectors[lens] = VectorSet(lens, keys, matrix)

    # -- lookups ----------------------------------------------------------

    @property
    def video_order(self) -> list[str]:
        return list(self.assets)

    def asset(self, video_id: str) -> VideoAsset:
        try:
            return self.assets[video_id]
        except KeyError:
            raise UnknownVideo(video_id) from None

    def frame(self, video_id: str, frame_index: int) -> FrameRecord:
        records = self.frames.get(video_id)
        if records is None:
            raise FrameNotFound(f"unknown video {video_id!r}")
        if not 0 <= frame_index < len(records):
            raise FrameNotFound(f"({video_id}, {frame_index})")
        return records[frame_index]

    def vector_set(self, lens: str) -> VectorSet:
        vs = self.vectors.get(lens)
        if vs is None:
            if lens in self.layouts or lens in self.districts:
                raise MissingVectors(f"lens {lens!r} has no vectors")
            raise LensNotFound(lens)
        return vs

    def frame_keys(self) -> list[FrameKey]:
        keys = [(vid, fr.frame_index) for vid, frs in self.frames.items() for fr in frs]
        keys.sort()
        return keys
