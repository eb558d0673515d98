"""Generate the demo corpus: three synthetic videos, a model file, a photo.

The corpus is tiny but deliberately structured:

* ``red_fade``  24 s: solid red, a panning red->blue gradient, solid blue.
* ``blue_sky``  10 s: solid blue, then a blue/white checkerboard.
* ``green_field`` 8 s: solid green, then a green->red gradient.

red_fade ends on exactly blue_sky's blue, so the color lens finds a
zero-distance match cut between them. The model file embeds frames through a
fixed random linear layer and pins a few known inputs to orthogonal unit
vectors: the text "torii gates" and the solid-blue frames share one axis, and
the two sentences in sentences.txt pin the red and green frames. photo.png is
pixel-identical to blue_sky's opening frame.

    python -m videomap.tools.fixturegen <out_dir>
"""

from __future__ import annotations

import json
import os
import sys

import numpy as np

DIMS = 512
PATCH = 8

RED = [200, 30, 30]
BLUE = [30, 60, 200]
GREEN = [30, 180, 40]
WHITE = [230, 230, 230]

VIDEOS = {
    "red_fade.json": {
        "format": "videomap-synthetic-v1",
        "width": 64, "height": 48, "fps": 4.0, "duration_s": 24.0,
        "scenes": [
            {"kind": "solid", "color": RED, "until_s": 8.0},
            {"kind": "hgradient", "left": RED, "right": BLUE,
             "pan_px_per_s": 16.0, "until_s": 16.0},
            {"kind": "solid", "color": BLUE, "until_s": 24.0},
        ],
    },
    "blue_sky.json": {
        "format": "videomap-synthetic-v1",
        "width": 64, "height": 48, "fps": 4.0, "duration_s": 10.0,
        "scenes": [
            {"kind": "solid", "color": BLUE, "until_s": 5.0},
            {"kind": "checker", "a": BLUE, "b": WHITE, "cell_px": 8,
             "flips_per_s": 0.5, "until_s": 10.0},
        ],
    },
    "green_field.json": {
        "format": "videomap-synthetic-v1",
        "width": 64, "height": 48, "fps": 4.0, "duration_s": 8.0,
        "scenes": [
            {"kind": "solid", "color": GREEN, "until_s": 4.0},
            {"kind": "hgradient", "left": GREEN, "right": RED,
             "pan_px_per_s": 16.0, "until_s": 8.0},
        ],
    },
}

SENTENCES = ["a bright red wall", "rolling green hills"]
PROMPT = "torii gates"


def _solid(color) -> np.ndarray:
    frame = np.empty((48, 64, 3), dtype=np.uint8)
    frame[:, :] = np.asarray(color, dtype=np.uint8)
    return frame


def _unit(axis: int) -> np.ndarray:
    v = np.zeros(DIMS, dtype=np.float32)
    v[axis] = 1.0
    return v


def write_corpus(out_dir: str) -> dict:
    from videomap.providers import image_key

    videos_dir = os.path.join(out_dir, "videos")
    os.makedirs(videos_dir, exist_ok=True)
    for name, doc in VIDEOS.items():
        with open(os.path.join(videos_dir, name), "w", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")

    with open(os.path.join(out_dir, "sentences.txt"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(SENTENCES) + "\n")

    from PIL import Image

    photo = _solid(BLUE)
    Image.fromarray(photo).save(os.path.join(out_dir, "photo.png"), format="PNG")

    rng = np.random.RandomState(1234)
    w_image = (rng.standard_normal((DIMS, PATCH * PATCH * 3)) * 0.05).astype(np.float64)
    planted_vecs = np.stack([_unit(0), _unit(1), _unit(2)])
    model_path = os.path.join(out_dir, "model.npz")
    np.savez(
        model_path,
        patch=np.array(PATCH),
        w_image=w_image,
        b_image=np.zeros(DIMS),
        image_keys=np.array([image_key(_solid(BLUE)), image_key(_solid(RED)),
                             image_key(_solid(GREEN))]),
        image_vecs=planted_vecs,
        text_keys=np.array([PROMPT, SENTENCES[0], SENTENCES[1]]),
        text_vecs=planted_vecs,
    )
    return {
        "videos_dir": videos_dir,
        "model": model_path,
        "photo": os.path.join(out_dir, "photo.png"),
        "sentences": os.path.join(out_dir, "sentences.txt"),
    }


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m videomap.tools.fixturegen <out_dir>", file=sys.stderr)
        return 2
    paths = write_corpus(argv[0])
    for k, v in paths.items():
        print(f"{k}: {v}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
