"""Build a map from raw footage and look at what came out.

Ingest samples each video at 1 Hz and stores thumbnails; each lens turns
frames into vectors; t-SNE drops them to 2D; the per-video re-layout then
lines each video up as a horizontal row through its own centroid so a map
region reads like a filmstrip.
"""

import sys

sys.path.insert(0, "demos")
from _workspace import ensure_workspace  # noqa: E402

project, lenses, registry, paths = ensure_workspace()

print(f"\nproject: {len(project.assets)} videos, "
      f"{sum(a.frame_count for a in project.assets.values())} sampled frames")
for vid in project.video_order:
    a = project.assets[vid]
    print(f"  {vid}: {a.duration_s:.0f} s @ {a.fps:.0f} fps "
          f"-> {a.frame_count} frames")

for name in lenses:
    vs = project.vectors[name]
    print(f"\nlens {name!r}: {vs.dims}-d vectors")
    for district in project.districts[name]:
        pts = [p for p in project.layouts[name] if p.video_id in district.id]
        xs = [p.display_xy[0] for p in pts]
        lm = next(l for l in project.landmarks[name]
                  if l.district_id == district.id)
        print(f"  district {district.id}: {len(district.member_frames)} frames, "
              f"row x [{min(xs):+.3f}, {max(xs):+.3f}], "
              f"landmark frame {lm.anchor_frame[1]}")
