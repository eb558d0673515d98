"""Text-driven navigation: prompt search over frames, sentence-to-clip matching.

Both operations embed text once under a text-capable lens and score videos by
the *maximum* cosine similarity over their frames — one strongly matching
moment is enough to surface a clip.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from videomap.errors import EmptyInput, MoreSentencesThanVideos, ProviderUnavailable
from videomap.lens import LensRegistry, embed_text

if TYPE_CHECKING:
    from videomap.project import MapProject

DEFAULT_SEARCH_K = 5


@dataclass(frozen=True)
class PromptResult:
    prompt: str
    lens: str
    per_video_scores: dict  # video_id -> max cosine similarity
    highlighted: tuple      # top-k video_ids, best first
    best_frame: dict        # video_id -> (video_id, frame_index)


def _text_unit(registry: LensRegistry, lens: str, text: str) -> np.ndarray:
    t = embed_text(registry, lens, text).astype(np.float64)
    norm = np.linalg.norm(t)
    if norm == 0.0:
        raise ProviderUnavailable("text embedding has zero norm")
    return t / norm


def _score_videos(project: "MapProject", lens: str, query_unit: np.ndarray):
    """Per-video max similarity and argmax frame; zero-norm frames ignored."""
    vs = project.vector_set(lens)
    sims = vs.unit @ query_unit
    scores: dict[str, float] = {}
    best: dict[str, tuple] = {}
    for i, key in enumerate(vs.keys):
        if not vs.usable[i]:
            continue
        vid = key[0]
        s = float(sims[i])
        if vid not in scores or s > scores[vid]:
            scores[vid] = s
            best[vid] = key
    for vid in project.video_order:  # degenerate videos still get a key
        scores.setdefault(vid, -1.0)
    return scores, best


def prompt_search(project: "MapProject", registry: LensRegistry, lens: str,
                  prompt: str, k: int = DEFAULT_SEARCH_K) -> PromptResult:
    if k < 1:
        raise ValueError("k must be >= 1")
    q = _text_unit(registry, lens, prompt)
    scores, best = _score_videos(project, lens, q)
    ranked = sorted(scores, key=lambda vid: (-scores[vid], vid))
    return PromptResult(prompt=prompt, lens=lens, per_video_scores=scores,
                        highlighted=tuple(ranked[:k]), best_frame=best)


def match_story(project: "MapProject", registry: LensRegistry, lens: str,
                sentences: list[str]) -> list[str]:
    """Assign each sentence (in order) its best still-unassigned video."""
    cleaned = [s for s in sentences if s and s.strip()]
    if len(cleaned) < 2:
        raise EmptyInput(f"need >= 2 nonempty sentences, got {len(cleaned)}")
    if len(cleaned) > len(project.assets):
        raise MoreSentencesThanVideos(
            f"{len(cleaned)} sentences but only {len(project.assets)} videos")

    assigned: list[str] = []
    taken: set[str] = set()
    for sentence in cleaned:
        q = _text_unit(registry, lens, sentence)
        scores, _ = _score_videos(project, lens, q)
        remaining = [v for v in scores if v not in taken]
        pick = min(remaining, key=lambda vid: (-scores[vid], vid))
        assigned.append(pick)
        taken.add(pick)
    return assigned
