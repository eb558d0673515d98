"""Story editing: write sentences, get a cut whose clips follow them.

Each sentence is embedded as text and matched to its best-scoring unused
video, in sentence order; the chosen videos are then chained *in that
order* (transitions still pick each pair's best match cut) and rendered.
The narrative controls the edit; the map only smooths the seams.
"""

import os
import sys

sys.path.insert(0, "demos")
from _workspace import ROOT, ensure_workspace  # noqa: E402

from videomap.media import MediaTool  # noqa: E402
from videomap.routing import chain_in_order, cutlist_to_json, route_to_cutlist  # noqa: E402
from videomap.search import match_story, prompt_search  # noqa: E402

project, lenses, registry, paths = ensure_workspace()

with open(paths["sentences"], "r", encoding="utf-8") as fh:
    sentences = [line.strip() for line in fh if line.strip()]
print("story:")
for i, s in enumerate(sentences, 1):
    print(f"  {i}. {s}")

order = match_story(project, registry, "semantic", sentences)
print(f"\nmatched videos, in sentence order: {' -> '.join(order)}")

route = chain_in_order(project, "semantic", order)
cutlist = route_to_cutlist(route, project,
                           min_segment_s=project.config.min_segment_s)
for seg, sentence in zip(cutlist.segments, sentences):
    print(f"  {seg.video_id} [{seg.entry_time_s:.1f} -> "
          f"{seg.exit_time_s:.1f}]s {seg.direction}  # {sentence}")

out_cut = os.path.join(ROOT, "story_cutlist.json")
out_media = os.path.join(ROOT, "story_cut.json")
with open(out_cut, "w", encoding="utf-8") as fh:
    fh.write(cutlist_to_json(cutlist, project) + "\n")
MediaTool().render(out_cut, out_media)
print(f"\nrendered {out_media} "
      f"({MediaTool().probe(out_media).duration_s:.1f} s)")

# and the reverse direction: a prompt highlighting videos on the map
result = prompt_search(project, registry, "semantic", "torii gates")
print(f"\nprompt 'torii gates' highlights: {', '.join(result.highlighted)}")
