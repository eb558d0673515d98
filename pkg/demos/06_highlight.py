"""Highlight: a photo becomes a custom landmark on the map.

The photo is embedded with the same lens as the frames; its nearest frame
anywhere in the collection anchors a 5.0 s clip, shifted (not shrunk) when
the match sits near the start or end of its video. The neighbors list is
the photo's own paths — up to 10, across all videos.
"""

import sys

sys.path.insert(0, "demos")
from _workspace import ensure_workspace  # noqa: E402

from videomap.extensions import decode_image, find_highlight  # noqa: E402

project, lenses, registry, paths = ensure_workspace()

with open(paths["photo"], "rb") as fh:
    photo = decode_image(fh.read())
print(f"photo: {paths['photo']} ({photo.shape[1]}x{photo.shape[0]})")

result = find_highlight(project, registry, "semantic", photo)
vid, fi = result.nearest_frame
print(f"\nnearest frame: {vid}#{fi}")
print(f"highlight clip: [{result.clip_start_s:.1f}, {result.clip_end_s:.1f}]s "
      f"({result.clip_end_s - result.clip_start_s:.1f} s, clamp keeps it "
      "inside the video)")

print("\nphoto's paths:")
for (nvid, nfi), dist in result.neighbors:
    print(f"  -> {nvid}#{nfi}  d={dist:.6f}")
