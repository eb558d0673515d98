import pytest

from videomap.build import (
    build_map_semantics,
    build_registry,
    embed_lens,
    ingest_directory,
    layout_lens,
)
from videomap.lens import COLOR, LensId
from videomap.media import MediaTool, sim_tool_path
from videomap.project import ProjectConfig
from videomap.projection import TsneConfig
from videomap.tools.fixturegen import write_corpus

SEED = 7

MODEL_LENSES = {
    "semantic": LensId("semantic", supports_text=True),
    "shape": LensId("shape", supports_text=False),
}


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """Deterministic demo corpus: 3 synthetic videos, model file, photo."""
    out = tmp_path_factory.mktemp("corpus")
    return write_corpus(str(out))


@pytest.fixture(scope="session")
def media():
    return MediaTool(sim_tool_path())


@pytest.fixture(scope="session")
def lens_meta():
    return {COLOR.name: COLOR, **MODEL_LENSES}


@pytest.fixture(scope="session")
def registry(corpus, lens_meta):
    return build_registry(lens_meta, model_file=corpus["model"])


@pytest.fixture(scope="session")
def built_project(tmp_path_factory, corpus, media, registry, lens_meta):
    """Fully built project over the corpus: color + semantic + shape lenses,
    layouts, districts, landmarks. Shared read-only across tests."""
    project_dir = str(tmp_path_factory.mktemp("project"))
    config = ProjectConfig(sample_rate_hz=1.0, tsne=TsneConfig(seed=SEED))
    project = ingest_directory(project_dir, corpus["videos_dir"],
                               config=config, media=media)
    for lens in lens_meta.values():
        embed_lens(project, lens, registry, media)
        layout_lens(project, lens.name)
        build_map_semantics(project, lens.name)
    project._test_dir = project_dir
    return project
