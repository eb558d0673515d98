"""Paths: candidate match cuts out of a single frame.

Clicking a node on the map asks for its nearest neighbors in *other*
videos — same-video frames are excluded, because a cut to your own next
frame is not a transition. Distances are cosine distances between the
original lens vectors, never the 2D positions.
"""

import sys

sys.path.insert(0, "demos")
from _workspace import ensure_workspace  # noqa: E402

from videomap.mapmodel import nearest_paths, node_details  # noqa: E402

project, lenses, registry, paths = ensure_workspace()

query = ("blue_sky", 7)  # a checkerboard frame
info = node_details(project, query)
print(f"node {query[0]}#{query[1]}: {info['filename']} @ {info['timecode']}")
print(f"thumbnail: {info['thumbnail_ref']}\n")

edges = nearest_paths(project, "color", query)  # default k = 10
print(f"{len(edges)} paths (color lens), nearest first:")
for rank, e in enumerate(edges, 1):
    print(f"  {rank:2d}. -> {e.to_frame[0]}#{e.to_frame[1]}  "
          f"d={e.distance:.6f}")

assert all(e.to_frame[0] != query[0] for e in edges)
print("\nno edge points back into the query's own video.")
