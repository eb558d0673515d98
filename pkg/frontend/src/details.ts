// Node details card: thumbnail, filename, timecode for the hovered or
// scrubbed frame. The thumbnail swaps instantly (it is just an <img> URL);
// filename/timecode come from the paths endpoint, debounced and cached so
// scrubbing a row doesn't fire a request per pixel.

import type { ApiClient } from "./api";
import type { FrameKey, PathsResponse } from "./types";

const DEBOUNCE_MS = 120;

export class DetailsPanel {
  readonly root: HTMLElement;
  current: FrameKey | null = null;

  private img: HTMLImageElement;
  private name: HTMLElement;
  private timecode: HTMLElement;
  private frameLabel: HTMLElement;
  private cache = new Map<string, PathsResponse>();
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(parent: HTMLElement, private service: ApiClient,
              private getLens: () => string) {
    this.root = document.createElement("div");
    this.root.className = "details";
    this.root.innerHTML = `
      <h3>Frame</h3>
      <img class="details-thumb" alt="">
      <div class="details-frame">hover a point</div>
      <div class="details-name"></div>
      <div class="details-tc"></div>`;
    this.img = this.root.querySelector(".details-thumb") as HTMLImageElement;
    this.name = this.root.querySelector(".details-name") as HTMLElement;
    this.timecode = this.root.querySelector(".details-tc") as HTMLElement;
    this.frameLabel = this.root.querySelector(".details-frame") as HTMLElement;
    parent.appendChild(this.root);
  }

  dispose(): void {
    if (this.timer) clearTimeout(this.timer);
    this.timer = null;
  }

  show(key: FrameKey | null): void {
    this.current = key;
    if (this.timer) clearTimeout(this.timer);
    if (!key) {
      this.frameLabel.textContent = "hover a point";
      return;
    }
    const [video, index] = key;
    this.img.src = this.service.frameUrl(video, index);
    this.frameLabel.textContent = `${video} · frame ${index}`;

    const cached = this.cache.get(this.cacheKey(key));
    if (cached) {
      this.fill(cached);
      return;
    }
    this.name.textContent = "…";
    this.timecode.textContent = "";
    this.timer = setTimeout(() => {
      void this.fetchFor(key);
    }, DEBOUNCE_MS);
  }

  /** Paths (and node details) for a frame, via the shared cache. */
  async pathsFor(key: FrameKey): Promise<PathsResponse> {
    const cached = this.cache.get(this.cacheKey(key));
    if (cached) return cached;
    const resp = await this.service.paths(key[0], key[1], this.getLens(), 10);
    this.cache.set(this.cacheKey(key), resp);
    return resp;
  }

  /** The map changed (new lens): cached details no longer apply. */
  reset(): void {
    this.cache.clear();
    this.show(null);
  }

  private cacheKey(key: FrameKey): string {
    return `${this.getLens()}|${key[0]}|${key[1]}`;
  }

  private async fetchFor(key: FrameKey): Promise<void> {
    try {
      const resp = await this.pathsFor(key);
      if (this.current && sameKey(this.current, key)) this.fill(resp);
    } catch {
      // hover details are best-effort; a failed lookup just leaves the card bare
      if (this.current && sameKey(this.current, key)) {
        this.name.textContent = "";
        this.timecode.textContent = "";
      }
    }
  }

  private fill(resp: PathsResponse): void {
    this.name.textContent = resp.node.filename;
    this.timecode.textContent = resp.node.timecode;
  }
}

function sameKey(a: FrameKey, b: FrameKey): boolean {
  return a[0] === b[0] && a[1] === b[1];
}
