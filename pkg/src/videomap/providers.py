"""Embedding providers for model-backed lenses.

Two real backends plus a planted-table fake for tests:

* HttpEmbeddingProvider — talks to an external embedding service. Request is
  multipart/form-data with fields ``lens_name``, ``payload_kind`` ("image" or
  "text") and ``payload`` (PNG bytes or UTF-8 text). Response body is binary:
  a little-endian u32 dimension count followed by that many little-endian
  float32 values. Anything other than HTTP 200, or a malformed body, raises
  ProviderUnavailable.
* NpzLinearProvider — a self-contained .npz model file: frames are downscaled
  to a small patch and pushed through one linear layer; text is averaged
  bag-of-vocab-words. Exists so maps can be built with no service running.
* PlantedProvider — exact lookup tables, for deterministic tests.
"""

from __future__ import annotations

import hashlib
import io
import os
import struct

import numpy as np
from PIL import Image

from videomap.errors import ModelAssetMissing, ProviderUnavailable, TextNotSupported


def image_key(image: np.ndarray) -> str:
    """Stable content hash of a decoded frame (shape-sensitive)."""
    arr = np.ascontiguousarray(np.asarray(image, dtype=np.uint8))
    h = hashlib.sha256()
    h.update(str(arr.shape).encode("ascii"))
    h.update(arr.tobytes())
    return h.hexdigest()


def _png_bytes(image: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(np.asarray(image, dtype=np.uint8)).save(buf, format="PNG")
    return buf.getvalue()


def decode_response(body: bytes) -> np.ndarray:
    if len(body) < 4:
        raise ProviderUnavailable("response shorter than dimension header")
    (dims,) = struct.unpack("<I", body[:4])
    if len(body) != 4 + 4 * dims:
        raise ProviderUnavailable(
            f"response declares {dims} dims but carries {len(body) - 4} bytes")
    return np.frombuffer(body, dtype="<f4", offset=4).astype(np.float32)


class HttpEmbeddingProvider:
    def __init__(self, base_url: str, lens_name: str, *, supports_text: bool = False,
                 timeout_s: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.lens_name = lens_name
        self.supports_text = supports_text
        self.timeout_s = timeout_s

    def _post(self, payload_kind: str, payload: bytes) -> np.ndarray:
        import requests

        try:
            resp = requests.post(
                f"{self.base_url}/embed",
                data={"lens_name": self.lens_name, "payload_kind": payload_kind},
                files={"payload": ("payload", payload, "application/octet-stream")},
                timeout=self.timeout_s,
            )
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"embedding service unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise ProviderUnavailable(
                f"embedding service returned HTTP {resp.status_code}")
        return decode_response(resp.content)

    def embed_image(self, image: np.ndarray) -> np.ndarray:
        return self._post("image", _png_bytes(image))

    def embed_text(self, text: str) -> np.ndarray:
        if not self.supports_text:
            raise TextNotSupported(self.lens_name)
        return self._post("text", text.encode("utf-8"))


def _token_vector(token: str, dims: int) -> np.ndarray:
    # Deterministic pseudo-embedding for out-of-vocab words.
    seed = int.from_bytes(hashlib.blake2s(token.encode("utf-8")).digest()[:4], "little")
    v = np.random.RandomState(seed).standard_normal(dims)
    return v / np.linalg.norm(v)


class NpzLinearProvider:
    """In-process model loaded from a .npz asset.

    Required keys: ``patch`` (int), ``w_image`` (dims, patch*patch*3),
    ``b_image`` (dims,). Text support needs ``vocab`` (str array) and
    ``w_text`` (len(vocab), dims). Optional planted tables ``image_keys``/
    ``image_vecs`` and ``text_keys``/``text_vecs`` win over the linear path,
    which lets a model file pin exact vectors for known inputs.
    """

    def __init__(self, path: str):
        if not os.path.isfile(path):
            raise ModelAssetMissing(path)
        with np.load(path, allow_pickle=False) as z:
            self.patch = int(z["patch"])
            self.w_image = z["w_image"].astype(np.float64)
            self.b_image = z["b_image"].astype(np.float64)
            self.vocab = [str(t) for t in z["vocab"]] if "vocab" in z else None
            self.w_text = z["w_text"].astype(np.float64) if "w_text" in z else None
            self._planted_images = self._table(z, "image_keys", "image_vecs")
            self._planted_text = self._table(z, "text_keys", "text_vecs")
        self.dims = self.w_image.shape[0]
        self.supports_text = self.w_text is not None or bool(self._planted_text)

    @staticmethod
    def _table(z, keys_name: str, vecs_name: str) -> dict[str, np.ndarray]:
        if keys_name not in z:
            return {}
        vecs = z[vecs_name].astype(np.float32)
        return {str(k): vecs[i] for i, k in enumerate(z[keys_name])}

    def _downsample(self, image: np.ndarray) -> np.ndarray:
        arr = np.asarray(image, dtype=np.uint8)
        h, w = arr.shape[0], arr.shape[1]
        # Nearest-neighbour with integer index math so results never depend
        # on float rounding.
        ys = (np.arange(self.patch) * h) // self.patch
        xs = (np.arange(self.patch) * w) // self.patch
        return arr[np.ix_(ys, xs)]

    def embed_image(self, image: np.ndarray) -> np.ndarray:
        planted = self._planted_images.get(image_key(image))
        if planted is not None:
            return planted.copy()
        x = self._downsample(image).astype(np.float64).ravel() / 255.0
        return (self.w_image @ x + self.b_image).astype(np.float32)

    def embed_text(self, text: str) -> np.ndarray:
        planted = self._planted_text.get(text)
        if planted is not None:
            return planted.copy()
        if self.w_text is None or self.vocab is None:
            raise TextNotSupported("model file has no text weights")
        index = {t: i for i, t in enumerate(self.vocab)}
        rows = []
        for token in text.lower().split():
            i = index.get(token)
            rows.append(self.w_text[i] if i is not None else _token_vector(token, self.dims))
        return np.mean(rows, axis=0).astype(np.float32)


class PlantedProvider:
    """Test double: exact lookup tables keyed by image_key / prompt text."""

    def __init__(self, images: dict[str, np.ndarray] | None = None,
                 texts: dict[str, np.ndarray] | None = None,
                 supports_text: bool = True):
        self.images = images or {}
        self.texts = texts or {}
        self.supports_text = supports_text

    def embed_image(self, image: np.ndarray) -> np.ndarray:
        key = image_key(image)
        if key not in self.images:
            raise ProviderUnavailable(f"no planted vector for image {key[:12]}")
        return np.asarray(self.images[key], dtype=np.float32)

    def embed_text(self, text: str) -> np.ndarray:
        if text not in self.texts:
            raise ProviderUnavailable(f"no planted vector for text {text!r}")
        return np.asarray(self.texts[text], dtype=np.float32)
