"""Engine error taxonomy.

Every error carries a stable machine ``code`` (its class name) so the API
layer and the CLI can map failures without string matching on messages.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine failures."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- ingest ---------------------------------------------------------------

class UndecodableFile(EngineError):
    pass


class ZeroDurationVideo(EngineError):
    pass


class DuplicatePath(EngineError):
    pass


class FrameNotFound(EngineError):
    pass


# --- lens / providers -----------------------------------------------------

class EmptyImage(EngineError):
    pass


class NonColorImage(EngineError):
    pass


class LensNotFound(EngineError):
    pass


class ProviderUnavailable(EngineError):
    pass


class ModelAssetMissing(EngineError):
    pass


class DimensionMismatch(EngineError):
    pass


class TextNotSupported(EngineError):
    pass


class EmptyPrompt(EngineError):
    pass


# --- projection -----------------------------------------------------------

class NonFiniteInput(EngineError):
    pass


class PerplexityInfeasible(EngineError):
    pass


class EmptyInput(EngineError):
    pass


# --- map model ------------------------------------------------------------

class MissingVectors(EngineError):
    pass


# --- routing --------------------------------------------------------------

class UnknownVideo(EngineError):
    pass


class TooFewVideos(EngineError):
    pass


class TooManyVideos(EngineError):
    pass


class MissingStreet(EngineError):
    pass


class DuplicateVideo(EngineError):
    pass


# --- search ---------------------------------------------------------------

class MoreSentencesThanVideos(EngineError):
    pass


# --- extensions -----------------------------------------------------------

class TooFewPoints(EngineError):
    pass


class LandmarkNotFound(EngineError):
    pass


class EmptySelection(EngineError):
    pass


class UndecodableImage(EngineError):
    pass


# --- store ----------------------------------------------------------------

class CorruptManifest(EngineError):
    pass


class MagicMismatch(EngineError):
    pass


class TruncatedSidecar(EngineError):
    pass


class UnsupportedVersion(EngineError):
    pass


# --- api ------------------------------------------------------------------

class RequestTimeout(EngineError):
    """Cooperatively cancelled long-running request (route planning)."""
