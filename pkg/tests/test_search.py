import numpy as np
import pytest

from videomap.errors import (
    EmptyInput,
    EmptyPrompt,
    MoreSentencesThanVideos,
    ProviderUnavailable,
    TextNotSupported,
)
from videomap.ingest import FrameRecord, VideoAsset
from videomap.lens import LensId, LensRegistry
from videomap.project import MapProject
from videomap.providers import PlantedProvider
from videomap.search import match_story, prompt_search

DIMS = 4


def unit(i):
    v = np.zeros(DIMS, dtype=np.float32)
    v[i] = 1.0
    return v


def make_project(frame_vectors: dict[str, list[np.ndarray]]) -> MapProject:
    project = MapProject()
    keys, rows = [], []
    for vid, vecs in frame_vectors.items():
        frames = [FrameRecord(vid, i, float(i), "") for i in range(len(vecs))]
        project.add_asset(
            VideoAsset(id=vid, path=f"/clips/{vid}.mp4", duration_s=float(len(vecs)),
                       fps=25.0, frame_count=len(vecs), width=64, height=48),
            frames)
        for i, v in enumerate(vecs):
            keys.append((vid, i))
            rows.append(np.asarray(v, dtype=np.float32))
    project.set_vectors("semantic", keys, np.stack(rows))
    return project


def make_registry(texts: dict[str, np.ndarray]) -> LensRegistry:
    registry = LensRegistry()
    registry.register(LensId("semantic", dims=DIMS, supports_text=True),
                      PlantedProvider(texts=texts))
    return registry


# --- prompt search ---------------------------------------------------------------

def test_planted_prompt_ranks_planted_video_first_with_similarity_one():
    registry = make_registry({"torii gates": unit(0)})
    project = make_project({
        "shrine": [unit(1), unit(0), unit(1)],   # frame 1 matches exactly
        "beach": [unit(2), unit(3)],
        "city": [unit(3)],
    })
    result = prompt_search(project, registry, "semantic", "torii gates")
    assert result.highlighted[0] == "shrine"
    assert result.per_video_scores["shrine"] == pytest.approx(1.0)
    assert result.best_frame["shrine"] == ("shrine", 1)
    assert result.prompt == "torii gates"
    assert result.lens == "semantic"


def test_video_score_is_max_over_frames():
    registry = make_registry({"q": unit(0)})
    half = np.array([1.0, 1.0, 0.0, 0.0], dtype=np.float32)  # cos = 1/sqrt(2)
    project = make_project({
        "mixed": [unit(1), half, unit(0)],
        "weak": [half],
    })
    result = prompt_search(project, registry, "semantic", "q")
    assert result.per_video_scores["mixed"] == pytest.approx(1.0)
    assert result.per_video_scores["weak"] == pytest.approx(np.sqrt(0.5))
    assert result.highlighted == ("mixed", "weak")


def test_rank_ties_break_by_video_id():
    registry = make_registry({"q": unit(0)})
    project = make_project({
        "zeta": [unit(0)],
        "alpha": [unit(0)],
        "mid": [unit(1)],
    })
    result = prompt_search(project, registry, "semantic", "q", k=3)
    assert result.highlighted == ("alpha", "zeta", "mid")


def test_k_clamps_and_validates():
    registry = make_registry({"q": unit(0)})
    project = make_project({"a": [unit(0)], "b": [unit(1)]})
    assert len(prompt_search(project, registry, "semantic", "q", k=50).highlighted) == 2
    with pytest.raises(ValueError):
        prompt_search(project, registry, "semantic", "q", k=0)


def test_scores_do_not_depend_on_frame_insertion_order():
    registry = make_registry({"q": unit(0)})
    vecs = {"a": [unit(0), unit(1), unit(2)], "b": [unit(3), unit(1)]}
    reversed_vecs = {vid: vs for vid, vs in reversed(list(vecs.items()))}
    r1 = prompt_search(make_project(vecs), registry, "semantic", "q")
    r2 = prompt_search(make_project(reversed_vecs), registry, "semantic", "q")
    assert r1.per_video_scores == r2.per_video_scores
    assert r1.highlighted == r2.highlighted


def test_prompt_search_error_paths():
    registry = make_registry({"q": unit(0), "void": np.zeros(DIMS)})
    registry.register(LensId("shape", dims=DIMS), PlantedProvider())
    project = make_project({"a": [unit(0)], "b": [unit(1)]})
    with pytest.raises(EmptyPrompt):
        prompt_search(project, registry, "semantic", "  ")
    with pytest.raises(TextNotSupported):
        prompt_search(project, registry, "shape", "q")
    with pytest.raises(ProviderUnavailable):
        prompt_search(project, registry, "semantic", "void")  # zero-norm text


def test_zero_norm_frames_are_ignored():
    registry = make_registry({"q": unit(0)})
    project = make_project({
        "a": [np.zeros(DIMS), unit(0)],
        "dead": [np.zeros(DIMS)],   # no usable frame at all
    })
    result = prompt_search(project, registry, "semantic", "q")
    assert result.per_video_scores["a"] == pytest.approx(1.0)
    assert result.best_frame["a"] == ("a", 1)
    assert result.per_video_scores["dead"] == -1.0
    assert "dead" not in result.best_frame
    assert result.highlighted == ("a", "dead")


# --- story matching ---------------------------------------------------------------

def test_story_assigns_planted_videos_in_sentence_order():
    registry = make_registry({
        "rolling green hills": unit(1),
        "a bright red wall": unit(0),
    })
    project = make_project({
        "brick": [unit(0)],
        "meadow": [unit(1)],
    })
    order = match_story(project, registry, "semantic",
                        ["rolling green hills", "a bright red wall"])
    assert order == ["meadow", "brick"]


def test_story_dedup_gives_later_sentence_next_best():
    registry = make_registry({
        "s1": unit(0),
        "s2": np.array([0.9, 0.1, 0.0, 0.0], dtype=np.float32),
    })
    # both sentences score highest on "top"; s1 claims it first (story order),
    # s2 falls back to its runner-up
    project = make_project({
        "top": [unit(0)],
        "backup": [np.array([0.6, 0.4, 0.0, 0.0], dtype=np.float32)],
    })
    assert match_story(project, registry, "semantic", ["s1", "s2"]) == ["top", "backup"]
    # reversing the story reverses the claim
    assert match_story(project, registry, "semantic", ["s2", "s1"]) == ["top", "backup"]


def test_story_result_has_no_duplicates():
    registry = make_registry({f"s{i}": unit(0) for i in range(3)})
    project = make_project({
        "a": [unit(0)], "b": [unit(0)], "c": [unit(0)],
    })
    order = match_story(project, registry, "semantic", ["s0", "s1", "s2"])
    assert sorted(order) == ["a", "b", "c"]   # all distinct
    assert order == ["a", "b", "c"]           # equal scores: video_id tie-break


def test_story_validation():
    registry = make_registry({"s1": unit(0), "s2": unit(1), "s3": unit(2)})
    project = make_project({"a": [unit(0)], "b": [unit(1)]})
    with pytest.raises(MoreSentencesThanVideos):
        match_story(project, registry, "semantic", ["s1", "s2", "s3"])
    with pytest.raises(EmptyInput):
        match_story(project, registry, "semantic", ["s1"])
    with pytest.raises(EmptyInput):
        match_story(project, registry, "semantic", ["s1", "   "])
    # blank sentences are dropped before matching
    order = match_story(project, registry, "semantic", ["s1", "", "s2"])
    assert order == ["a", "b"]
