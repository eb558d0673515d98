"""Summarization: one video, k semantic districts, a 3-second bite of each.

k-means (k-means++ seeding, best of three) clusters the video's own frames
in the semantic space; the elbow of the within-cluster-scatter curve picks
k. Each cluster's landmark expands into a fixed 3.0 s segment, and playing
the segments in landmark order is the summary.
"""

import sys

sys.path.insert(0, "demos")
from _workspace import ensure_workspace  # noqa: E402

from videomap.extensions import build_semantic_districts, summarize  # noqa: E402

project, lenses, registry, paths = ensure_workspace()

video = "red_fade"
ds = build_semantic_districts(project, "semantic", video, seed=0)

print(f"{video}: scatter curve over k = 1..{len(ds.wcss_curve)}")
for k, wcss in enumerate(ds.wcss_curve, 1):
    marker = "  <- elbow" if k == ds.k else ""
    print(f"  k={k}: wcss {wcss:.4f}{marker}")

print(f"\n{ds.k} districts:")
for d, lm in zip(ds.districts, ds.landmarks):
    frames = sorted(fi for _, fi in d.member_frames)
    print(f"  {d.id}: frames {frames[0]}..{frames[-1]} "
          f"({len(frames)} total), landmark #{lm.anchor_frame[1]}")

cutlist = summarize(project, ds, [d.id for d in ds.districts])
print("\nsummary cutlist:")
for seg in cutlist.segments:
    print(f"  [{seg.entry_time_s:5.1f} -> {seg.exit_time_s:5.1f}]s "
          f"({seg.exit_time_s - seg.entry_time_s:.1f} s)")
print(f"total {cutlist.total_duration_s:.1f} s from a "
      f"{project.assets[video].duration_s:.0f} s video")
