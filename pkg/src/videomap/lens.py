"""Lenses: ways of encoding frames as vectors so proximity means something.

The color lens is native (an 8x8x8 RGB histogram flattened to 512 values);
semantic and shape lenses are backed by pluggable embedding providers behind
a registry. All built-in lenses are 512-dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from videomap.errors import (
    DimensionMismatch,
    EmptyImage,
    EmptyPrompt,
    LensNotFound,
    NonColorImage,
    ProviderUnavailable,
    TextNotSupported,
)

DIMS = 512
COLOR_BINS = 8  # per channel; 8**3 == 512
_BIN_SHIFT = 5  # 256 / 8 == 32 == 1 << 5


@dataclass(frozen=True)
class LensId:
    name: str
    dims: int = DIMS
    supports_text: bool = False


@dataclass(frozen=True)
class LensVector:
    lens: str
    video_id: str
    frame_index: int
    values: np.ndarray = field(repr=False)


COLOR = LensId("color", DIMS, supports_text=False)
SEMANTIC = LensId("semantic", DIMS, supports_text=True)
SHAPE = LensId("shape", DIMS, supports_text=False)


def color_histogram(image: np.ndarray) -> np.ndarray:
    """512-d L1-normalized RGB histogram, 8 uniform bins per channel on [0, 256).

    Bin b covers [32b, 32b+32); the flat index is rBin*64 + gBin*8 + bBin.
    Normalizing by pixel count makes the vector resolution-invariant.
    """
    arr = np.asarray(image)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise NonColorImage(f"expected (h, w, 3), got {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise EmptyImage("image has no pixels")
    if arr.dtype != np.uint8:
        if np.any(arr < 0) or np.any(arr > 255):
            raise NonColorImage("channel values outside [0, 255]")
        arr = arr.astype(np.uint8)
    bins = (arr >> _BIN_SHIFT).astype(np.int64)
    flat = (bins[..., 0] * 64 + bins[..., 1] * 8 + bins[..., 2]).ravel()
    counts = np.bincount(flat, minlength=DIMS).astype(np.float64)
    return (counts / flat.size).astype(np.float32)


class LensRegistry:
    """Known lenses and, for model-backed ones, their providers."""

    def __init__(self):
        self._lenses: dict[str, LensId] = {COLOR.name: COLOR}
        self._providers: dict[str, object] = {}

    def register(self, lens: LensId, provider=None) -> None:
        if lens.dims < 2:
            raise DimensionMismatch(f"lens dims must be >= 2, got {lens.dims}")
        self._lenses[lens.name] = lens
        if provider is not None:
            self._providers[lens.name] = provider

    def get(self, name: str) -> LensId:
        try:
            return self._lenses[name]
        except KeyError:
            raise LensNotFound(name) from None

    def provider_for(self, name: str):
        lens = self.get(name)
        if lens.name == COLOR.name:
            return None
        provider = self._providers.get(name)
        if provider is None:
            raise ProviderUnavailable(f"no provider registered for lens {name!r}")
        return provider

    def names(self) -> list[str]:
        return sorted(self._lenses)


def _check_vector(lens: LensId, values: np.ndarray, source: str) -> np.ndarray:
    values = np.asarray(values)
    if values.ndim != 1 or values.shape[0] != lens.dims:
        raise DimensionMismatch(
            f"{source} returned {values.shape} values for lens {lens.name!r} "
            f"(want {lens.dims})")
    if not np.all(np.isfinite(values)):
        raise ProviderUnavailable(f"{source} returned non-finite values")
    return values.astype(np.float32)


def embed_image(registry: LensRegistry, lens_name: str, image: np.ndarray) -> np.ndarray:
    """Deterministic 512-d vector for (lens, image); routes color natively."""
    lens = registry.get(lens_name)
    if lens.name == COLOR.name:
        return color_histogram(image)
    provider = registry.provider_for(lens_name)
    return _check_vector(lens, provider.embed_image(image), f"provider {lens_name!r}")


def embed_text(registry: LensRegistry, lens_name: str, prompt: str) -> np.ndarray:
    lens = registry.get(lens_name)
    if not lens.supports_text:
        raise TextNotSupported(lens_name)
    if not prompt or not prompt.strip():
        raise EmptyPrompt("prompt is empty after trimming")
    provider = registry.provider_for(lens_name)
    return _check_vector(lens, provider.embed_text(prompt.strip()), f"provider {lens_name!r}")
