// Storyboard strip: the cut list as a row of cards. Route planning,
// summarization and story matching all end in one of these.

import type { ApiClient } from "./api";
import type { AssetInfo, CutListPayload, CutSegment } from "./types";

export class Storyboard {
  readonly root: HTMLElement;
  cutlist: CutListPayload | null = null;
  private assets = new Map<string, AssetInfo>();

  constructor(parent: HTMLElement, private service: ApiClient) {
    this.root = document.createElement("div");
    this.root.className = "storyboard";
    parent.appendChild(this.root);
  }

  setAssets(assets: AssetInfo[]): void {
    this.assets.clear();
    for (const a of assets) this.assets.set(a.id, a);
  }

  clear(): void {
    this.cutlist = null;
    this.root.replaceChildren();
  }

  show(cutlist: CutListPayload): void {
    this.cutlist = cutlist;
    this.root.replaceChildren();
    cutlist.segments.forEach((seg, i) => {
      this.root.appendChild(this.card(seg, i));
    });
  }

  private card(seg: CutSegment, i: number): HTMLElement {
    const el = document.createElement("div");
    el.className = "board-card";
    el.dataset.video = seg.video_id;

    const img = document.createElement("img");
    img.className = "board-thumb";
    img.alt = seg.video_id;
    img.src = this.service.frameUrl(seg.video_id, this.thumbIndex(seg));
    el.appendChild(img);

    const title = document.createElement("div");
    title.className = "board-title";
    title.textContent = `${i + 1}. ${seg.video_id}`;
    el.appendChild(title);

    const time = document.createElement("div");
    time.className = "board-time";
    const arrow = seg.direction === "reverse" ? "←" : "→";
    time.textContent =
      `${seg.entry_time_s.toFixed(1)}s ${arrow} ${seg.exit_time_s.toFixed(1)}s`;
    el.appendChild(time);

    if (seg.direction === "reverse") {
      const badge = document.createElement("span");
      badge.className = "board-reverse";
      badge.textContent = "reversed";
      el.appendChild(badge);
    }
    return el;
  }

  /** Pick a representative sampled frame for the segment's entry time. */
  private thumbIndex(seg: CutSegment): number {
    const asset = this.assets.get(seg.video_id);
    if (!asset || asset.duration_s <= 0) return 0;
    const perSecond = asset.frame_count / asset.duration_s;
    let i = Math.round(seg.entry_time_s * perSecond);
    if (i < 0) i = 0;
    if (i > asset.frame_count - 1) i = asset.frame_count - 1;
    return i;
  }
}
