import struct
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import pytest

from videomap.errors import (
    DimensionMismatch,
    EmptyImage,
    EmptyPrompt,
    LensNotFound,
    ModelAssetMissing,
    NonColorImage,
    ProviderUnavailable,
    TextNotSupported,
)
from videomap.lens import (
    COLOR,
    DIMS,
    LensId,
    LensRegistry,
    color_histogram,
    embed_image,
    embed_text,
)
from videomap.providers import (
    HttpEmbeddingProvider,
    NpzLinearProvider,
    PlantedProvider,
    decode_response,
    image_key,
)


# --- color histogram ---------------------------------------------------------

def test_histogram_hand_computed_bins():
    # Four pixels, each 1/4 of the mass. Bin = channel >> 5, flat index
    # rBin*64 + gBin*8 + bBin.
    img = np.array([[[0, 0, 0], [255, 255, 255]],
                    [[32, 64, 96], [31, 63, 95]]], dtype=np.uint8)
    hist = color_histogram(img)
    expected = {0: 0.25,                      # (0,0,0)
                511: 0.25,                    # (7,7,7)
                1 * 64 + 2 * 8 + 3: 0.25,     # (32,64,96)
                0 * 64 + 1 * 8 + 2: 0.25}     # (31,63,95)
    assert hist.shape == (DIMS,)
    assert hist.dtype == np.float32
    for idx, weight in expected.items():
        assert hist[idx] == pytest.approx(weight)
    assert hist.sum() == pytest.approx(1.0, abs=1e-6)
    assert np.count_nonzero(hist) == 4


def test_histogram_l1_normalized_on_random_images():
    rng = np.random.RandomState(0)
    for _ in range(20):
        img = rng.randint(0, 256, size=(17, 23, 3), dtype=np.uint8)
        hist = color_histogram(img)
        assert abs(hist.sum() - 1.0) <= 1e-6
        assert np.all(hist >= 0)


def test_histogram_invariant_to_pixel_shuffle():
    rng = np.random.RandomState(1)
    img = rng.randint(0, 256, size=(20, 30, 3), dtype=np.uint8)
    flat = img.reshape(-1, 3)
    shuffled = flat[rng.permutation(flat.shape[0])].reshape(img.shape)
    np.testing.assert_array_equal(color_histogram(img), color_histogram(shuffled))


def test_histogram_invariant_to_2x_upsample():
    rng = np.random.RandomState(2)
    img = rng.randint(0, 256, size=(12, 9, 3), dtype=np.uint8)
    big = np.repeat(np.repeat(img, 2, axis=0), 2, axis=1)
    np.testing.assert_allclose(color_histogram(img), color_histogram(big), atol=1e-6)


def test_histogram_rejects_bad_shapes_and_ranges():
    with pytest.raises(NonColorImage):
        color_histogram(np.zeros((4, 4), dtype=np.uint8))       # grayscale
    with pytest.raises(NonColorImage):
        color_histogram(np.zeros((4, 4, 4), dtype=np.uint8))    # RGBA
    with pytest.raises(EmptyImage):
        color_histogram(np.zeros((0, 4, 3), dtype=np.uint8))
    with pytest.raises(NonColorImage):
        color_histogram(np.full((2, 2, 3), 300.0))              # out of range


# --- registry + embed wrappers ----------------------------------------------

def _unit(i, dims=DIMS):
    v = np.zeros(dims, dtype=np.float32)
    v[i] = 1.0
    return v


def test_registry_color_is_builtin_and_names_sorted():
    reg = LensRegistry()
    reg.register(LensId("shape"), PlantedProvider())
    reg.register(LensId("semantic", supports_text=True), PlantedProvider())
    assert reg.names() == ["color", "semantic", "shape"]
    assert reg.get("color") is COLOR
    assert reg.provider_for("color") is None
    with pytest.raises(LensNotFound):
        reg.get("depth")
    with pytest.raises(DimensionMismatch):
        reg.register(LensId("tiny", dims=1))


def test_registry_model_lens_without_provider_is_unavailable():
    reg = LensRegistry()
    reg.register(LensId("shape"))
    with pytest.raises(ProviderUnavailable):
        reg.provider_for("shape")


def test_embed_image_routes_color_natively():
    reg = LensRegistry()
    img = np.full((4, 4, 3), 40, dtype=np.uint8)
    np.testing.assert_array_equal(embed_image(reg, "color", img), color_histogram(img))


def test_embed_image_validates_provider_output():
    img = np.zeros((2, 2, 3), dtype=np.uint8)
    key = image_key(img)

    reg = LensRegistry()
    reg.register(LensId("shape"), PlantedProvider(images={key: np.zeros(7)}))
    with pytest.raises(DimensionMismatch):
        embed_image(reg, "shape", img)

    bad = np.zeros(DIMS)
    bad[0] = np.nan
    reg = LensRegistry()
    reg.register(LensId("shape"), PlantedProvider(images={key: bad}))
    with pytest.raises(ProviderUnavailable):
        embed_image(reg, "shape", img)


def test_embed_text_guards():
    reg = LensRegistry()
    reg.register(LensId("shape"), PlantedProvider())
    reg.register(LensId("semantic", supports_text=True),
                 PlantedProvider(texts={"hello": _unit(3)}))
    with pytest.raises(TextNotSupported):
        embed_text(reg, "shape", "hello")
    with pytest.raises(TextNotSupported):
        embed_text(reg, "color", "hello")
    with pytest.raises(EmptyPrompt):
        embed_text(reg, "semantic", "   ")
    # prompt is trimmed before the provider sees it
    np.testing.assert_array_equal(embed_text(reg, "semantic", "  hello  "), _unit(3))


# --- wire format --------------------------------------------------------------

def _pack(vec: np.ndarray) -> bytes:
    return struct.pack("<I", vec.size) + vec.astype("<f4").tobytes()


def test_decode_response_roundtrip():
    vec = np.arange(5, dtype=np.float32) / 3
    out = decode_response(_pack(vec))
    np.testing.assert_array_equal(out, vec)
    assert out.dtype == np.float32


def test_decode_response_rejects_malformed_bodies():
    with pytest.raises(ProviderUnavailable):
        decode_response(b"\x01\x00")                       # shorter than header
    with pytest.raises(ProviderUnavailable):
        decode_response(struct.pack("<I", 3) + b"\x00" * 8)  # declares 3, carries 2


# --- HTTP provider (against a local mock service) -----------------------------

class _MockEmbedHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = self.rfile.read(length)
        self.server.last_request = (self.path, dict(self.headers), body)
        mode = self.server.mode
        if mode == "http500":
            self.send_response(500)
            self.end_headers()
            return
        payload = _pack(self.server.vector)
        if mode == "truncated":
            payload = payload[:-2]
        self.send_response(200)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):  # keep pytest output clean
        pass


@pytest.fixture()
def mock_service():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _MockEmbedHandler)
    server.mode = "ok"
    server.vector = np.linspace(0, 1, DIMS).astype(np.float32)
    server.last_request = None
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    thread.join()


def test_http_provider_posts_multipart_and_decodes(mock_service):
    port = mock_service.server_address[1]
    provider = HttpEmbeddingProvider(f"http://127.0.0.1:{port}", "semantic",
                                     supports_text=True)
    img = np.zeros((3, 3, 3), dtype=np.uint8)
    out = provider.embed_image(img)
    np.testing.assert_array_equal(out, mock_service.vector)

    path, headers, body = mock_service.last_request
    assert path == "/embed"
    assert headers["Content-Type"].startswith("multipart/form-data")
    assert b'name="lens_name"' in body and b"semantic" in body
    assert b'name="payload_kind"' in body and b"image" in body
    assert b"\x89PNG" in body  # payload carries the encoded frame

    out = provider.embed_text("red gate")
    np.testing.assert_array_equal(out, mock_service.vector)
    _, _, body = mock_service.last_request
    assert b"text" in body and b"red gate" in body


def test_http_provider_maps_failures_to_provider_unavailable(mock_service):
    port = mock_service.server_address[1]
    provider = HttpEmbeddingProvider(f"http://127.0.0.1:{port}", "semantic")
    img = np.zeros((3, 3, 3), dtype=np.uint8)

    mock_service.mode = "http500"
    with pytest.raises(ProviderUnavailable):
        provider.embed_image(img)

    mock_service.mode = "truncated"
    with pytest.raises(ProviderUnavailable):
        provider.embed_image(img)


def test_http_provider_unreachable_host():
    provider = HttpEmbeddingProvider("http://127.0.0.1:9", "semantic", timeout_s=0.5)
    with pytest.raises(ProviderUnavailable):
        provider.embed_image(np.zeros((2, 2, 3), dtype=np.uint8))


def test_http_provider_text_requires_text_support():
    provider = HttpEmbeddingProvider("http://127.0.0.1:9", "shape")
    with pytest.raises(TextNotSupported):
        provider.embed_text("anything")


# --- npz model provider --------------------------------------------------------

@pytest.fixture()
def tiny_model(tmp_path):
    rng = np.random.RandomState(5)
    patch = 2
    dims = 4
    planted_img = np.full((3, 3, 3), 9, dtype=np.uint8)
    path = tmp_path / "tiny.npz"
    np.savez(
        path,
        patch=np.int64(patch),
        w_image=rng.standard_normal((dims, patch * patch * 3)),
        b_image=rng.standard_normal(dims),
        vocab=np.array(["red", "blue"]),
        w_text=np.array([[1, 0, 0, 0], [0, 1, 0, 0]], dtype=np.float64),
        image_keys=np.array([image_key(planted_img)]),
        image_vecs=np.array([[9, 9, 9, 9]], dtype=np.float32),
        text_keys=np.array(["torii gates"]),
        text_vecs=np.array([[1, 2, 3, 4]], dtype=np.float32),
    )
    return str(path), planted_img


def test_npz_provider_linear_image_path(tiny_model):
    path, _ = tiny_model
    p = NpzLinearProvider(path)
    img = np.arange(4 * 6 * 3, dtype=np.uint8).reshape(4, 6, 3)
    # Oracle: nearest-neighbour downsample with integer index math, then the
    # affine map, computed here from the raw weights.
    ys = (np.arange(p.patch) * 4) // p.patch
    xs = (np.arange(p.patch) * 6) // p.patch
    x = img[np.ix_(ys, xs)].astype(np.float64).ravel() / 255.0
    expected = (p.w_image @ x + p.b_image).astype(np.float32)
    np.testing.assert_array_equal(p.embed_image(img), expected)


def test_npz_provider_planted_tables_win(tiny_model):
    path, planted_img = tiny_model
    p = NpzLinearProvider(path)
    np.testing.assert_array_equal(p.embed_image(planted_img),
                                  np.array([9, 9, 9, 9], dtype=np.float32))
    np.testing.assert_array_equal(p.embed_text("torii gates"),
                                  np.array([1, 2, 3, 4], dtype=np.float32))


def test_npz_provider_text_vocab_average(tiny_model):
    path, _ = tiny_model
    p = NpzLinearProvider(path)
    np.testing.assert_allclose(p.embed_text("red red"), [1, 0, 0, 0])
    np.testing.assert_allclose(p.embed_text("Red Blue"), [0.5, 0.5, 0, 0])
    # out-of-vocab tokens get a deterministic unit pseudo-embedding
    a, b = p.embed_text("zebra"), p.embed_text("zebra")
    np.testing.assert_array_equal(a, b)
    assert np.linalg.norm(a) == pytest.approx(1.0, abs=1e-6)
    assert not np.allclose(a, p.embed_text("yak"))


def test_npz_provider_missing_file():
    with pytest.raises(ModelAssetMissing):
        NpzLinearProvider("/nonexistent/model.npz")


# --- misc ----------------------------------------------------------------------

def test_image_key_is_shape_sensitive():
    a = np.zeros((2, 6, 3), dtype=np.uint8)
    b = np.zeros((6, 2, 3), dtype=np.uint8)
    assert image_key(a) != image_key(b)
    assert image_key(a) == image_key(a.copy())


def test_planted_provider_raises_for_unknown_inputs():
    p = PlantedProvider()
    with pytest.raises(ProviderUnavailable):
        p.embed_image(np.zeros((2, 2, 3), dtype=np.uint8))
    with pytest.raises(ProviderUnavailable):
        p.embed_text("unseen")
