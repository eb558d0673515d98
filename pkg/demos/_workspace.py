"""Shared bootstrap for the demo scripts.

First call builds a full project over the bundled synthetic corpus inside
demos/.workspace (ingest at 1 Hz, all three lenses, layouts, districts);
later calls reload it from disk, so each demo starts in well under a second
after the first. Delete the directory to rebuild from scratch.
"""

import os

from videomap.build import (
    build_map_semantics,
    build_registry,
    embed_lens,
    ingest_directory,
    layout_lens,
)
from videomap.lens import COLOR, LensId
from videomap.media import MEDIA_BIN_ENV, MediaTool, sim_tool_path
from videomap.project import ProjectConfig
from videomap.projection import TsneConfig
from videomap.store import load_project, save_project
from videomap.tools.fixturegen import write_corpus

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), ".workspace")

LENSES = {
    COLOR.name: COLOR,
    "semantic": LensId("semantic", supports_text=True),
    "shape": LensId("shape", supports_text=False),
}


def ensure_workspace():
    """Return (project, lens_meta, registry, paths) for the demo corpus."""
    os.environ.setdefault(MEDIA_BIN_ENV, sim_tool_path())
    corpus_dir = os.path.join(ROOT, "corpus")
    project_dir = os.path.join(ROOT, "project")
    paths = (write_corpus(corpus_dir) if not os.path.isdir(corpus_dir)
             else _corpus_paths(corpus_dir))
    registry = build_registry(LENSES, model_file=paths["model"])

    if os.path.isfile(os.path.join(project_dir, "manifest.json")):
        project, _ = load_project(project_dir)
        return project, LENSES, registry, paths

    print("building demo workspace (one-time) ...")
    media = MediaTool()
    config = ProjectConfig(sample_rate_hz=1.0, tsne=TsneConfig(seed=7))
    project = ingest_directory(project_dir, paths["videos_dir"],
                               config=config, media=media)
    for lens in LENSES.values():
        embed_lens(project, lens, registry, media)
        layout_lens(project, lens.name)
        build_map_semantics(project, lens.name)
        print(f"  lens {lens.name}: {len(project.vectors[lens.name])} vectors")
    save_project(project, project_dir, LENSES)
    return project, LENSES, registry, paths


def _corpus_paths(corpus_dir):
    return {
        "videos_dir": os.path.join(corpus_dir, "videos"),
        "model": os.path.join(corpus_dir, "model.npz"),
        "photo": os.path.join(corpus_dir, "photo.png"),
        "sentences": os.path.join(corpus_dir, "sentences.txt"),
    }
