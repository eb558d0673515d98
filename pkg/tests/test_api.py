import time

import pytest
from fastapi.testclient import TestClient

from videomap.api import create_app

ALL_VIDEOS = ["blue_sky", "green_field", "red_fade"]  # ingest (filename) order
TOTAL_FRAMES = 10 + 8 + 24


@pytest.fixture(scope="module")
def client(built_project, registry, media):
    app = create_app(built_project, registry, media=media,
                     project_dir=built_project._test_dir)
    with TestClient(app) as c:
        yield c


# --- reads ------------------------------------------------------------------------

def test_lenses_listing(client):
    body = client.get("/api/lenses").json()
    assert [l["name"] for l in body["lenses"]] == ["color", "semantic", "shape"]
    by_name = {l["name"]: l["supports_text"] for l in body["lenses"]}
    assert by_name == {"color": False, "semantic": True, "shape": False}


def test_assets_listing(client):
    body = client.get("/api/assets").json()
    assert [a["id"] for a in body["assets"]] == ALL_VIDEOS
    blue = body["assets"][0]
    assert blue["filename"] == "blue_sky.json"
    assert blue["duration_s"] == pytest.approx(10.0)
    assert blue["frame_count"] == 10
    assert (blue["width"], blue["height"]) == (64, 48)


@pytest.mark.parametrize("lens", ["color", "semantic", "shape"])
def test_map_payload_per_lens(client, lens):
    r = client.get("/api/map", params={"lens": lens})
    assert r.status_code == 200
    body = r.json()
    assert body["lens"] == lens
    assert len(body["points"]) == TOTAL_FRAMES
    assert {d["id"] for d in body["districts"]} == set(ALL_VIDEOS)
    assert [d["color_index"] for d in body["districts"]] == [0, 1, 2]
    assert len(body["landmarks"]) == 3
    for p in body["points"]:
        assert len(p["raw_xy"]) == 2 and len(p["display_xy"]) == 2


def test_repeated_map_get_is_byte_identical(client):
    a = client.get("/api/map", params={"lens": "color"})
    b = client.get("/api/map", params={"lens": "color"})
    assert a.content == b.content


def test_unknown_lens_is_404_with_code(client):
    r = client.get("/api/map", params={"lens": "thermal"})
    assert r.status_code == 404
    body = r.json()
    assert body["code"] == "LensNotFound"
    assert "thermal" in body["message"]


def test_frame_endpoint_serves_jpeg(client):
    r = client.get("/api/frame/blue_sky/3")
    assert r.status_code == 200
    assert r.headers["content-type"] == "image/jpeg"
    assert r.content[:2] == b"\xff\xd8"
    assert client.get("/api/frame/blue_sky/99").status_code == 404
    assert client.get("/api/frame/nope/0").status_code == 404


def test_node_paths_sorted_and_cross_video(client):
    r = client.get("/api/node/red_fade/0/paths", params={"lens": "semantic"})
    assert r.status_code == 200
    body = r.json()
    assert body["query"] == ["red_fade", 0]
    assert body["node"]["filename"] == "red_fade.json"
    assert body["node"]["timecode"] == "00:00:00.000"
    edges = body["edges"]
    assert 0 < len(edges) <= 10
    dists = [e["distance"] for e in edges]
    assert dists == sorted(dists)
    assert all(e["from"] == ["red_fade", 0] for e in edges)
    assert all(e["to"][0] != "red_fade" for e in edges)


def test_node_paths_k_parameter(client):
    r = client.get("/api/node/blue_sky/0/paths",
                   params={"lens": "color", "k": 3})
    assert len(r.json()["edges"]) == 3


# --- route planning -----------------------------------------------------------------

def test_route_two_videos_single_transition(client):
    r = client.post("/api/route",
                    json={"lens": "color", "video_ids": ["blue_sky", "red_fade"]})
    assert r.status_code == 200
    body = r.json()
    assert sorted(body["order"]) == ["blue_sky", "red_fade"]
    assert len(body["transitions"]) == 1
    # red_fade ends on frames pixel-identical to blue_sky's opening: free cut
    assert body["total_weight"] == pytest.approx(0.0, abs=1e-6)


def test_route_three_videos(client):
    r = client.post("/api/route",
                    json={"lens": "color", "video_ids": ALL_VIDEOS})
    body = r.json()
    assert sorted(body["order"]) == ALL_VIDEOS
    assert len(body["transitions"]) == 2
    assert body["total_weight"] == pytest.approx(
        sum(t["distance"] for t in body["transitions"]))
    for t, (frm, to) in zip(body["transitions"],
                            zip(body["order"], body["order"][1:])):
        assert t["from"][0] == frm and t["to"][0] == to


def test_route_error_codes(client):
    r = client.post("/api/route", json={
        "lens": "color", "video_ids": [f"v{i}" for i in range(21)]})
    assert r.status_code == 422
    assert r.json()["code"] == "TooManyVideos"

    r = client.post("/api/route", json={
        "lens": "color", "video_ids": ["blue_sky", "ghost"]})
    assert r.status_code == 404
    assert r.json()["code"] == "UnknownVideo"

    r = client.post("/api/route", json={
        "lens": "color", "video_ids": ["blue_sky", "blue_sky"]})
    assert r.status_code == 422
    assert r.json()["code"] == "DuplicateVideo"

    r = client.post("/api/route", json={
        "lens": "color", "video_ids": ["blue_sky"]})
    assert r.status_code == 422
    assert r.json()["code"] == "TooFewVideos"


def test_cutlist_from_route_order(client):
    r = client.post("/api/cutlist",
                    json={"route": {"lens": "color", "order": ALL_VIDEOS}})
    assert r.status_code == 200
    body = r.json()
    assert body["version"] == 1
    assert body["lens"] == "color"
    assert [seg["video_id"] for seg in body["segments"]] == ALL_VIDEOS
    for seg in body["segments"]:
        assert seg["direction"] in ("forward", "reverse")
        assert seg["source_path"].endswith(f"{seg['video_id']}.json")


# --- rendering ------------------------------------------------------------------------

def _wait_for(client, job_id, deadline_s=20.0):
    end = time.monotonic() + deadline_s
    while time.monotonic() < end:
        body = client.get(f"/api/render/{job_id}").json()
        if body["status"] in ("done", "error"):
            return body
        time.sleep(0.05)
    raise AssertionError("render job never settled")


def test_render_job_lifecycle(client):
    cutlist = client.post(
        "/api/cutlist",
        json={"route": {"lens": "color", "order": ["blue_sky", "red_fade"]}}).json()
    r = client.post("/api/render", json={"cutlist": cutlist})
    assert r.status_code == 200
    job_id = r.json()["job_id"]

    body = _wait_for(client, job_id)
    assert body == {"job_id": job_id, "status": "done", "error": None}

    media_file = client.get(f"/api/render/{job_id}/file")
    assert media_file.status_code == 200
    assert len(media_file.content) > 0


def test_render_job_error_is_reported(client):
    cutlist = {
        "version": 1, "lens": "color",
        "segments": [{"video_id": "x", "source_path": "/nonexistent.json",
                      "entry_time_s": 0.0, "exit_time_s": 1.0,
                      "direction": "forward"}],
    }
    job_id = client.post("/api/render", json={"cutlist": cutlist}).json()["job_id"]
    body = _wait_for(client, job_id)
    assert body["status"] == "error"
    assert body["error"]


def test_render_endpoint_validation(client):
    assert client.get("/api/render/nosuchjob").status_code == 404
    r = client.post("/api/render", json={"nonsense": True})
    assert r.status_code == 422
    assert r.json()["code"] == "EmptyInput"
    # a job that is not done yet has no file
    assert client.get("/api/render/nosuchjob/file").status_code == 404


# --- search / summarize / highlight / story ----------------------------------------------

def test_search_planted_prompt(client):
    r = client.post("/api/search",
                    json={"lens": "semantic", "prompt": "torii gates"})
    assert r.status_code == 200
    body = r.json()
    assert body["highlighted"][0] == "blue_sky"
    assert body["per_video_scores"]["blue_sky"] == pytest.approx(1.0)
    assert body["per_video_scores"]["red_fade"] == pytest.approx(1.0)  # shared frames
    assert body["best_frame"]["blue_sky"] == ["blue_sky", 0]


def test_search_error_codes(client):
    r = client.post("/api/search", json={"lens": "semantic", "prompt": "  "})
    assert (r.status_code, r.json()["code"]) == (422, "EmptyPrompt")
    r = client.post("/api/search", json={"lens": "color", "prompt": "x"})
    assert (r.status_code, r.json()["code"]) == (422, "TextNotSupported")
    r = client.post("/api/search", json={"lens": "nope", "prompt": "x"})
    assert (r.status_code, r.json()["code"]) == (404, "LensNotFound")


def test_semantic_districts_endpoint(client):
    r = client.get("/api/summarize/red_fade/districts",
                   params={"lens": "color", "seed": 0})
    assert r.status_code == 200
    body = r.json()
    assert body["video_id"] == "red_fade"
    assert len(body["wcss_curve"]) == 3   # 24 frames -> k_max = 3
    assert body["k"] == len(body["districts"]) == len(body["landmarks"])
    members = sorted(tuple(m) for d in body["districts"] for m in d["members"])
    assert members == [("red_fade", i) for i in range(24)]


def test_summarize_segments_are_three_seconds(client):
    districts = client.get("/api/summarize/red_fade/districts",
                           params={"lens": "color", "seed": 0}).json()
    r = client.post("/api/summarize",
                    json={"video_id": "red_fade", "lens": "color", "seed": 0})
    assert r.status_code == 200
    segments = r.json()["segments"]
    assert len(segments) == districts["k"]
    for seg in segments:
        assert seg["video_id"] == "red_fade"
        assert seg["direction"] == "forward"
        assert seg["exit_time_s"] - seg["entry_time_s"] == pytest.approx(3.0)


def test_highlight_photo_snaps_to_identical_frame(client, corpus):
    with open(corpus["photo"], "rb") as fh:
        photo = fh.read()
    r = client.post("/api/highlight", files={"photo": ("photo.png", photo, "image/png")})
    assert r.status_code == 200
    body = r.json()
    assert body["nearest_frame"] == ["blue_sky", 0]
    assert body["clip"] == {"start_s": 0.0, "end_s": 5.0}
    assert 0 < len(body["neighbors"]) <= 10
    dists = [n["distance"] for n in body["neighbors"]]
    assert dists == sorted(dists)
    assert dists[0] == pytest.approx(0.0, abs=1e-7)


def test_highlight_rejects_garbage_photo(client):
    r = client.post("/api/highlight",
                    files={"photo": ("x.png", b"not an image", "image/png")})
    assert (r.status_code, r.json()["code"]) == (422, "UndecodableImage")


def test_story_order_matches_sentences(client):
    sentences = ["a bright red wall", "rolling green hills"]
    r = client.post("/api/story", json={"lens": "semantic", "sentences": sentences})
    assert r.status_code == 200
    body = r.json()
    assert body["order"] == ["red_fade", "green_field"]
    assert body["route"]["order"] == ["red_fade", "green_field"]
    assert [seg["video_id"] for seg in body["cutlist"]["segments"]] == \
        ["red_fade", "green_field"]


def test_story_too_many_sentences(client):
    r = client.post("/api/story", json={
        "lens": "semantic", "sentences": ["a", "b", "c", "d"]})
    assert (r.status_code, r.json()["code"]) == (422, "MoreSentencesThanVideos")


def test_unknown_route_is_404(client):
    assert client.get("/api/nope").status_code == 404
