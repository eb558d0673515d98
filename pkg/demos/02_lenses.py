"""One collection, three maps: how the lens changes what 'near' means.

The color lens is a 512-bin RGB histogram computed in-process; semantic and
shape come from an embedding provider (here the bundled linear .npz model).
The same query frame lands in different neighborhoods under each lens.
"""

import sys

sys.path.insert(0, "demos")
from _workspace import ensure_workspace  # noqa: E402

from videomap.mapmodel import nearest_paths, node_details  # noqa: E402

project, lenses, registry, paths = ensure_workspace()

query = ("red_fade", 20)  # a solid-blue frame near the end of the fade
details = node_details(project, query)
print(f"query: {details['filename']} @ {details['timecode']}")

for name in lenses:
    edges = nearest_paths(project, name, query, k=3)
    print(f"\nlens {name!r} says its closest cross-video matches are:")
    for e in edges:
        vid, fi = e.to_frame
        t = node_details(project, e.to_frame)["timecode"]
        print(f"  {vid}#{fi} ({t})  distance {e.distance:.6f}")

print("\nunder 'color', blue_sky's solid frames match exactly (distance 0);")
print("the model lenses rank by whatever structure the provider encodes.")
