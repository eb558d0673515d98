// The remaining side-panel screens: prompt search, single-video
// summarization, photo highlight, and story matching. Each one is a thin
// form over one or two service calls; results land on the map overlay
// and/or the storyboard.

import type { ApiClient } from "./api";
import type { MapView } from "./mapview";
import type { Storyboard } from "./storyboard";
import type {
  AssetInfo,
  SearchResponse,
  SemanticDistrictsResponse,
  StoryResponse,
} from "./types";

export interface ScreenHooks {
  /** lens to use for text queries (must support text embedding) */
  getTextLens: () => string;
  report: (err: unknown) => void;
}

// ─── prompt search ──────────────────────────────────────────────────────────

export class SearchPanel {
  readonly root: HTMLElement;
  lastResult: SearchResponse | null = null;

  private input: HTMLInputElement;
  private kInput: HTMLInputElement;
  private chips: HTMLElement;

  constructor(parent: HTMLElement, private service: ApiClient,
              private view: MapView, private hooks: ScreenHooks) {
    this.root = document.createElement("div");
    this.root.className = "search-panel";
    this.root.innerHTML = `
      <h3>Prompt</h3>
      <div class="row">
        <input class="prompt-input" type="text" placeholder="describe a shot">
        <input class="prompt-k" type="number" min="1" placeholder="k" title="top-k videos">
        <button class="prompt-go">Search</button>
        <button class="prompt-clear">Clear</button>
      </div>
      <div class="score-chips"></div>`;
    this.input = this.root.querySelector(".prompt-input") as HTMLInputElement;
    this.kInput = this.root.querySelector(".prompt-k") as HTMLInputElement;
    this.chips = this.root.querySelector(".score-chips") as HTMLElement;
    (this.root.querySelector(".prompt-go") as HTMLElement)
      .addEventListener("click", () => void this.submit());
    this.input.addEventListener("keydown", (e) => {
      if (e.key === "Enter") void this.submit();
    });
    (this.root.querySelector(".prompt-clear") as HTMLElement)
      .addEventListener("click", () => this.clear());
    parent.appendChild(this.root);
  }

  async submit(): Promise<void> {
    const prompt = this.input.value.trim();
    if (!prompt) return;
    const k = parseInt(this.kInput.value, 10);
    try {
      const resp = await this.service.search(
        this.hooks.getTextLens(), prompt, Number.isFinite(k) && k > 0 ? k : undefined);
      this.lastResult = resp;
      this.view.setSearch(resp);
      this.renderChips(resp);
    } catch (err) {
      this.hooks.report(err);
    }
  }

  clear(): void {
    this.lastResult = null;
    this.view.setSearch(null);
    this.chips.replaceChildren();
  }

  private renderChips(resp: SearchResponse): void {
    this.chips.replaceChildren();
    const scored = Object.entries(resp.per_video_scores)
      .sort((a, b) => b[1] - a[1]);
    for (const [vid, score] of scored) {
      const chip = document.createElement("span");
      chip.className = "chip" + (resp.highlighted.includes(vid) ? " chip-hit" : "");
      chip.dataset.video = vid;
      chip.textContent = `${vid} ${score.toFixed(2)}`;
      this.chips.appendChild(chip);
    }
  }
}

// ─── summarization ──────────────────────────────────────────────────────────

export class SummarizePanel {
  readonly root: HTMLElement;
  clickOrder: string[] = [];
  districts: SemanticDistrictsResponse | null = null;

  private videoSel: HTMLSelectElement;
  private cards: HTMLElement;
  private orderEl: HTMLElement;
  private infoEl: HTMLElement;

  constructor(parent: HTMLElement, private service: ApiClient,
              private board: Storyboard, private hooks: ScreenHooks) {
    this.root = document.createElement("div");
    this.root.className = "summarize-panel";
    this.root.innerHTML = `
      <h3>Summarize</h3>
      <div class="row">
        <select class="sum-video"></select>
        <button class="sum-load">Load scenes</button>
      </div>
      <div class="sum-info"></div>
      <div class="sum-cards"></div>
      <div class="sum-order"></div>
      <div class="row">
        <button class="sum-build">Build summary</button>
        <button class="sum-reset">Reset order</button>
      </div>`;
    this.videoSel = this.root.querySelector(".sum-video") as HTMLSelectElement;
    this.cards = this.root.querySelector(".sum-cards") as HTMLElement;
    this.orderEl = this.root.querySelector(".sum-order") as HTMLElement;
    this.infoEl = this.root.querySelector(".sum-info") as HTMLElement;
    (this.root.querySelector(".sum-load") as HTMLElement)
      .addEventListener("click", () => void this.loadDistricts());
    (this.root.querySelector(".sum-build") as HTMLElement)
      .addEventListener("click", () => void this.build());
    (this.root.querySelector(".sum-reset") as HTMLElement)
      .addEventListener("click", () => {
        this.clickOrder = [];
        this.renderOrder();
      });
    parent.appendChild(this.root);
  }

  setAssets(assets: AssetInfo[]): void {
    this.videoSel.replaceChildren();
    for (const a of assets) {
      const opt = document.createElement("option");
      opt.value = a.id;
      opt.textContent = a.id;
      this.videoSel.appendChild(opt);
    }
  }

  async loadDistricts(): Promise<void> {
    const video = this.videoSel.value;
    if (!video) return;
    try {
      const ds = await this.service.semanticDistricts(
        video, this.hooks.getTextLens(), 0);
      this.districts = ds;
      this.clickOrder = [];
      this.renderOrder();
      this.infoEl.textContent =
        `k=${ds.k} · wcss ${ds.wcss_curve.map((w) => w.toFixed(1)).join(" → ")}`;
      this.cards.replaceChildren();
      for (const lm of ds.landmarks) {
        const members = ds.districts.find((d) => d.id === lm.district_id);
        const card = document.createElement("div");
        card.className = "scene-card";
        card.dataset.district = lm.district_id;
        const img = document.createElement("img");
        img.src = this.service.frameUrl(lm.anchor[0], lm.anchor[1]);
        img.alt = lm.district_id;
        const label = document.createElement("div");
        label.textContent =
          `${lm.district_id} (${members ? members.members.length : 0} frames)`;
        card.append(img, label);
        card.addEventListener("click", () => {
          // repeats allowed: the click order is a play order
          this.clickOrder.push(lm.district_id);
          this.renderOrder();
        });
        this.cards.appendChild(card);
      }
    } catch (err) {
      this.hooks.report(err);
    }
  }

  async build(): Promise<void> {
    if (!this.districts) return;
    try {
      const order = this.clickOrder.length > 0 ? this.clickOrder : undefined;
      const cl = await this.service.summarize(
        this.districts.video_id, this.hooks.getTextLens(), 0, order ?? []);
      this.board.show(cl);
    } catch (err) {
      this.hooks.report(err);
    }
  }

  private renderOrder(): void {
    this.orderEl.replaceChildren();
    this.clickOrder.forEach((id, i) => {
      const chip = document.createElement("span");
      chip.className = "chip";
      chip.textContent = `${i + 1}. ${id}`;
      this.orderEl.appendChild(chip);
    });
  }
}

// ─── photo highlight ────────────────────────────────────────────────────────

export class HighlightPanel {
  readonly root: HTMLElement;

  private fileInput: HTMLInputElement;
  private infoEl: HTMLElement;

  constructor(parent: HTMLElement, private service: ApiClient,
              private view: MapView, private hooks: ScreenHooks) {
    this.root = document.createElement("div");
    this.root.className = "highlight-panel";
    this.root.innerHTML = `
      <h3>Highlight</h3>
      <p class="hint">Upload a photo; the closest moment becomes a landmark.</p>
      <input class="photo-input" type="file" accept="image/*">
      <div class="highlight-info"></div>`;
    this.fileInput = this.root.querySelector(".photo-input") as HTMLInputElement;
    this.infoEl = this.root.querySelector(".highlight-info") as HTMLElement;
    this.fileInput.addEventListener("change", () => void this.upload());
    parent.appendChild(this.root);
  }

  async upload(): Promise<void> {
    const file = this.fileInput.files?.[0];
    if (!file) return;
    try {
      const resp = await this.service.highlight(file, this.hooks.getTextLens());
      this.view.setPhotoPath(resp);
      const [vid, idx] = resp.nearest_frame;
      this.infoEl.textContent =
        `nearest ${vid} · frame ${idx} · clip ` +
        `${resp.clip.start_s.toFixed(1)}s – ${resp.clip.end_s.toFixed(1)}s · ` +
        `${resp.neighbors.length} neighbors`;
    } catch (err) {
      this.hooks.report(err);
    }
  }
}

// ─── story matching ─────────────────────────────────────────────────────────

export interface StoryHooks extends ScreenHooks {
  onRoute: (route: StoryResponse["route"]) => void;
}

export class StoryPanel {
  readonly root: HTMLElement;
  lastStory: StoryResponse | null = null;

  private textarea: HTMLTextAreaElement;
  private orderEl: HTMLElement;

  constructor(parent: HTMLElement, private service: ApiClient,
              private board: Storyboard, private hooks: StoryHooks) {
    this.root = document.createElement("div");
    this.root.className = "story-panel";
    this.root.innerHTML = `
      <h3>Story</h3>
      <p class="hint">One sentence per line; videos are ordered to match.</p>
      <textarea class="story-text" rows="4"></textarea>
      <div class="row"><button class="story-go">Match story</button></div>
      <div class="story-order"></div>`;
    this.textarea = this.root.querySelector(".story-text") as HTMLTextAreaElement;
    this.orderEl = this.root.querySelector(".story-order") as HTMLElement;
    (this.root.querySelector(".story-go") as HTMLElement)
      .addEventListener("click", () => void this.submit());
    parent.appendChild(this.root);
  }

  async submit(): Promise<void> {
    const sentences = this.textarea.value
      .split("\n")
      .map((s) => s.trim())
      .filter((s) => s.length > 0);
    if (sentences.length === 0) return;
    try {
      const resp = await this.service.story(this.hooks.getTextLens(), sentences);
      this.lastStory = resp;
      this.orderEl.replaceChildren();
      resp.order.forEach((vid, i) => {
        const chip = document.createElement("span");
        chip.className = "chip";
        chip.dataset.video = vid;
        chip.textContent = `${i + 1}. ${vid}`;
        this.orderEl.appendChild(chip);
      });
      this.board.show(resp.cutlist);
      this.hooks.onRoute(resp.route);
    } catch (err) {
      this.hooks.report(err);
    }
  }
}
