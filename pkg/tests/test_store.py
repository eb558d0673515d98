import json
import os
import struct

import numpy as np
import pytest

from videomap.errors import (
    CorruptManifest,
    MagicMismatch,
    TruncatedSidecar,
    UnsupportedVersion,
)
from videomap.ingest import FrameRecord, VideoAsset
from videomap.lens import LensId
from videomap.mapmodel import District, Landmark
from videomap.project import MapProject, ProjectConfig
from videomap.projection import MapPoint2D, TsneConfig
from videomap.store import (
    MANIFEST_NAME,
    load_project,
    read_sidecar,
    save_project,
    sidecar_name,
    write_sidecar,
)


def sample_project() -> MapProject:
    rng = np.random.RandomState(0)
    config = ProjectConfig(sample_rate_hz=2.0, tsne=TsneConfig(seed=3),
                           spacing_fraction=0.01, min_segment_s=1.5)
    project = MapProject(config)
    for vid, n in [("beta", 3), ("alpha", 2)]:  # deliberately not sorted
        frames = [FrameRecord(vid, i, i / 2.0, f"thumbs/{vid}{i}.jpg")
                  for i in range(n)]
        project.add_asset(
            VideoAsset(id=vid, path=f"/media/{vid}.mp4", duration_s=n / 2.0,
                       fps=24.0, frame_count=n, width=320, height=240),
            frames)
    keys = [(vid, i) for vid, frs in project.frames.items()
            for i in range(len(frs))]
    project.set_vectors("color", keys, rng.standard_normal((5, 16)).astype(np.float32))
    project.set_vectors("shape", keys, rng.standard_normal((5, 8)).astype(np.float32))
    project.layouts["color"] = [
        MapPoint2D(lens="color", video_id=vid, frame_index=i,
                   raw_xy=(rng.uniform(), rng.uniform()),
                   display_xy=(rng.uniform(), rng.uniform()))
        for vid, i in keys
    ]
    project.districts["color"] = [
        District(id="beta", member_frames=(("beta", 0), ("beta", 1), ("beta", 2)),
                 color_index=0, kind="per-video"),
        District(id="alpha", member_frames=(("alpha", 0), ("alpha", 1)),
                 color_index=1, kind="per-video"),
    ]
    project.landmarks["color"] = [
        Landmark(district_id="beta", anchor_frame=("beta", 1),
                 thumbnail_ref="thumbs/beta1.jpg"),
        Landmark(district_id="alpha", anchor_frame=("alpha", 0),
                 thumbnail_ref="thumbs/alpha0.jpg"),
    ]
    return project


LENS_META = {"color": LensId("color", 16), "shape": LensId("shape", 8)}


# --- sidecars ----------------------------------------------------------------------

def test_sidecar_roundtrip_is_bitwise(tmp_path):
    path = str(tmp_path / "vectors_color.bin")
    matrix = np.random.RandomState(1).standard_normal((7, 12)).astype(np.float32)
    write_sidecar(path, "color", matrix)
    back = read_sidecar(path, "color")
    assert back.dtype == np.float32
    assert back.tobytes() == matrix.tobytes()


def test_sidecar_header_layout(tmp_path):
    path = str(tmp_path / "v.bin")
    write_sidecar(path, "semantic", np.zeros((2, 3), dtype=np.float32))
    blob = open(path, "rb").read()
    assert blob[:4] == b"VMAP"
    version, dims, count, nlen = struct.unpack_from("<HHIH", blob, 4)
    assert (version, dims, count, nlen) == (1, 3, 2, len(b"semantic"))
    assert blob[14:14 + nlen] == b"semantic"
    assert len(blob) == 14 + nlen + 2 * 3 * 4


def test_sidecar_error_cases(tmp_path):
    path = str(tmp_path / "v.bin")
    matrix = np.ones((2, 2), dtype=np.float32)
    write_sidecar(path, "color", matrix)

    with pytest.raises(CorruptManifest):
        read_sidecar(str(tmp_path / "missing.bin"), "color")
    with pytest.raises(CorruptManifest):
        read_sidecar(path, "shape")  # name mismatch

    blob = open(path, "rb").read()
    bad = str(tmp_path / "bad.bin")

    open(bad, "wb").write(b"XXXX" + blob[4:])
    with pytest.raises(MagicMismatch):
        read_sidecar(bad, "color")

    open(bad, "wb").write(blob[:-3])  # drop data bytes
    with pytest.raises(TruncatedSidecar):
        read_sidecar(bad, "color")

    open(bad, "wb").write(blob[:7])  # header cut mid-struct
    with pytest.raises(TruncatedSidecar):
        read_sidecar(bad, "color")

    open(bad, "wb").write(b"VMAP" + struct.pack("<HHIH", 9, 2, 2, 5) + blob[14:])
    with pytest.raises(UnsupportedVersion):
        read_sidecar(bad, "color")


# --- project round trip ----------------------------------------------------------------

def test_project_roundtrip_preserves_everything(tmp_path):
    project = sample_project()
    save_project(project, str(tmp_path), LENS_META)

    loaded, lens_meta = load_project(str(tmp_path))
    assert loaded.schema_version == project.schema_version
    assert loaded.config == project.config
    assert loaded.video_order == project.video_order  # ingest order survives
    for vid in project.assets:
        assert loaded.asset(vid) == project.asset(vid)
        assert loaded.frames[vid] == project.frames[vid]
    for lens in ("color", "shape"):
        assert loaded.vectors[lens].keys == project.vectors[lens].keys
        assert (loaded.vectors[lens].matrix.tobytes()
                == project.vectors[lens].matrix.tobytes())  # bitwise
    assert loaded.layouts == project.layouts
    assert loaded.districts == project.districts
    assert loaded.landmarks == project.landmarks
    assert lens_meta == LENS_META


def test_double_save_is_byte_identical(tmp_path):
    project = sample_project()
    dir_a, dir_b = str(tmp_path / "a"), str(tmp_path / "b")
    save_project(project, dir_a, LENS_META)
    save_project(project, dir_b, LENS_META)
    for name in [MANIFEST_NAME, sidecar_name("color"), sidecar_name("shape")]:
        a = open(os.path.join(dir_a, name), "rb").read()
        b = open(os.path.join(dir_b, name), "rb").read()
        assert a == b, name

    # and saving on top of an existing project changes nothing
    save_project(project, dir_a, LENS_META)
    again = open(os.path.join(dir_a, MANIFEST_NAME), "rb").read()
    assert again == open(os.path.join(dir_b, MANIFEST_NAME), "rb").read()


def test_manifest_is_canonical_json(tmp_path):
    save_project(sample_project(), str(tmp_path), LENS_META)
    raw = open(os.path.join(str(tmp_path), MANIFEST_NAME), "rb").read()
    assert raw.endswith(b"\n")
    text = raw.decode("utf-8")
    payload = json.loads(text)
    assert payload["schema_version"] == 1
    # canonical form: sorted keys, no spaces
    assert text[:-1] == json.dumps(payload, sort_keys=True, separators=(",", ":"),
                                   ensure_ascii=False)
    # ingest order is data, not key order
    assert [a["id"] for a in payload["assets"]] == ["beta", "alpha"]


def test_load_error_cases(tmp_path):
    with pytest.raises(CorruptManifest):
        load_project(str(tmp_path))  # no manifest at all

    mpath = os.path.join(str(tmp_path), MANIFEST_NAME)
    open(mpath, "w").write("{ not json")
    with pytest.raises(CorruptManifest):
        load_project(str(tmp_path))

    open(mpath, "w").write(json.dumps({"schema_version": 99}))
    with pytest.raises(UnsupportedVersion):
        load_project(str(tmp_path))

    open(mpath, "w").write(json.dumps({"schema_version": 1}))  # fields missing
    with pytest.raises(CorruptManifest):
        load_project(str(tmp_path))


def test_missing_sidecar_is_corrupt_manifest(tmp_path):
    save_project(sample_project(), str(tmp_path), LENS_META)
    os.remove(os.path.join(str(tmp_path), sidecar_name("shape")))
    with pytest.raises(CorruptManifest):
        load_project(str(tmp_path))


def test_sidecar_shape_mismatch_is_corrupt(tmp_path):
    save_project(sample_project(), str(tmp_path), LENS_META)
    write_sidecar(os.path.join(str(tmp_path), sidecar_name("shape")), "shape",
                  np.zeros((2, 8), dtype=np.float32))  # wrong row count
    with pytest.raises(CorruptManifest):
        load_project(str(tmp_path))


def test_no_temp_files_left_behind(tmp_path):
    save_project(sample_project(), str(tmp_path), LENS_META)
    leftovers = [n for n in os.listdir(str(tmp_path)) if n.endswith(".tmp")]
    assert leftovers == []
