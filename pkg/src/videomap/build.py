"""Project build pipeline: ingest a directory, embed lenses, lay out maps.

The CLI and the HTTP service both drive these; nothing here is interactive.
Pixels are never persisted — embedding re-decodes frames through the media
tool, so `ingest` and `embed` can run as separate passes.
"""

from __future__ import annotations

import os
import sys

import numpy as np

from videomap.errors import EmptyInput, LensNotFound, UndecodableFile
from videomap.ingest import AssetCatalog, ingest_video
from videomap.lens import COLOR, LensId, LensRegistry, embed_image
from videomap.media import MediaTool
from videomap.mapmodel import build_districts, compute_landmark
from videomap.project import MapProject, ProjectConfig
from videomap.projection import MapPoint2D, rearrange_by_video, tsne_project
from videomap.providers import HttpEmbeddingProvider, NpzLinearProvider


def discover_media(media_dir: str) -> list[str]:
    names = sorted(os.listdir(media_dir))
    return [os.path.join(media_dir, n) for n in names
            if not n.startswith(".") and os.path.isfile(os.path.join(media_dir, n))]


def ingest_directory(project_dir: str, media_dir: str, *,
                     config: ProjectConfig | None = None,
                     media: MediaTool | None = None,
                     warn=lambda msg: print(msg, file=sys.stderr)) -> MapProject:
    """Ingest every decodable file in a directory, in name order.

    Non-media files are skipped with a warning so mixed directories work;
    a directory yielding zero videos is an error.
    """
    media = media or MediaTool()
    config = config or ProjectConfig()
    project = MapProject(config)
    catalog = AssetCatalog()
    for path in discover_media(media_dir):
        try:
            vid = catalog.claim_id(path)
            asset, frames, _ = ingest_video(
                path, config.sample_rate_hz, asset_id=vid,
                project_dir=project_dir, media=media)
        except (UndecodableFile,) as exc:
            warn(f"skipping {path}: {exc}")
            continue
        catalog.register(asset, frames)
        project.add_asset(asset, frames)
    if not project.assets:
        raise EmptyInput(f"no decodable videos in {media_dir}")
    return project


def build_registry(lens_meta: dict[str, LensId], *,
                   provider_url: str | None = None,
                   model_file: str | None = None) -> LensRegistry:
    """Wire model-backed lenses to a provider; the color lens is native.

    Precedence: explicit provider URL, then model file, then the
    VIDEOMAP_PROVIDER_URL environment variable.
    """
    provider_url = provider_url or os.environ.get("VIDEOMAP_PROVIDER_URL") or None
    registry = LensRegistry()
    shared_model = NpzLinearProvider(model_file) if model_file and not provider_url else None
    for name, lens in lens_meta.items():
        if name == COLOR.name:
            registry.register(lens)
            continue
        provider = None
        if provider_url:
            provider = HttpEmbeddingProvider(provider_url, name,
                                             supports_text=lens.supports_text)
        elif shared_model is not None:
            provider = shared_model
        registry.register(lens, provider)
    return registry


def embed_lens(project: MapProject, lens: LensId, registry: LensRegistry,
               media: MediaTool | None = None) -> None:
    """Compute one vector per sampled frame under a lens; rows land in the
    project's VectorSet. Frames are re-decoded video by video."""
    media = media or MediaTool()
    keys = []
    rows = []
    for vid in project.video_order:
        asset = project.assets[vid]
        pixels = media.sample_frames(
            asset.path, project.config.sample_rate_hz,
            media.probe(asset.path))
        records = project.frames[vid]
        if pixels.shape[0] < len(records):
            raise UndecodableFile(
                f"{asset.path}: {pixels.shape[0]} frames decoded, catalog has {len(records)}")
        for fr in records:
            keys.append((vid, fr.frame_index))
            rows.append(embed_image(registry, lens.name, pixels[fr.frame_index]))
    project.set_vectors(lens.name, keys, np.vstack(rows))


def layout_lens(project: MapProject, lens_name: str) -> None:
    """t-SNE raw placement + per-video chronological rows for one lens."""
    vs = project.vector_set(lens_name)
    raw = tsne_project(vs.matrix, project.config.tsne)
    points = [
        MapPoint2D(lens=lens_name, video_id=vid, frame_index=fi,
                   raw_xy=(float(x), float(y)))
        for (vid, fi), (x, y) in zip(vs.keys, raw)
    ]
    project.layouts[lens_name] = rearrange_by_video(
        points, project.config.spacing_fraction)


def build_map_semantics(project: MapProject, lens_name: str) -> None:
    districts = build_districts(project, lens_name)
    project.districts[lens_name] = districts
    project.landmarks[lens_name] = [
        compute_landmark(project, lens_name, d) for d in districts
    ]


def resolve_lenses(lens_meta: dict[str, LensId], selector: str) -> list[LensId]:
    """Expand a CLI/API lens selector ('all' or a name) against known lenses."""
    if selector == "all":
        names = sorted(lens_meta) or [COLOR.name]
        return [lens_meta.get(n, LensId(n)) for n in names]
    if selector in lens_meta:
        return [lens_meta[selector]]
    if selector == COLOR.name:
        return [COLOR]
    raise LensNotFound(selector)
