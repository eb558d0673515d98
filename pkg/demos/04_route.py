"""Route Planner: a rough cut through selected clips, automatically.

Every pair of selected videos gets one 'street' (their single best match
cut); the planner then solves the shortest Hamiltonian path over street
weights, so the final ordering visits each clip once with the least total
transition cost. The route becomes a CutList, and the media tool renders it.
"""

import os
import sys

sys.path.insert(0, "demos")
from _workspace import ROOT, ensure_workspace  # noqa: E402

from videomap.media import MediaTool  # noqa: E402
from videomap.routing import (  # noqa: E402
    build_streets,
    cutlist_to_json,
    plan_route,
    route_to_cutlist,
)

project, lenses, registry, paths = ensure_workspace()

videos = list(project.video_order)
streets = build_streets(project, "color", videos)
print("streets (one best transition per pair):")
for s in streets:
    e = s.best_edge
    print(f"  {s.video_a} <-> {s.video_b}: weight {s.weight:.6f} "
          f"via {e.from_frame[0]}#{e.from_frame[1]} -> "
          f"{e.to_frame[0]}#{e.to_frame[1]}")

route = plan_route(streets, videos, lens="color")
print(f"\nbest order: {' -> '.join(route.order)} "
      f"(total {route.total_weight:.6f})")

cutlist = route_to_cutlist(route, project,
                           min_segment_s=project.config.min_segment_s)
for seg in cutlist.segments:
    print(f"  play {seg.video_id} [{seg.entry_time_s:.1f} -> "
          f"{seg.exit_time_s:.1f}]s {seg.direction}")

out_cut = os.path.join(ROOT, "route_cutlist.json")
out_media = os.path.join(ROOT, "rough_cut.json")
with open(out_cut, "w", encoding="utf-8") as fh:
    fh.write(cutlist_to_json(cutlist, project) + "\n")
MediaTool().render(out_cut, out_media)
info = MediaTool().probe(out_media)
print(f"\nrendered {out_media}: {info.duration_s:.1f} s "
      f"@ {info.fps:.0f} fps ({info.width}x{info.height})")
