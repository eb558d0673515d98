// Route planner: tick clips, plan a route through them, inspect the cut
// list on the storyboard, then render the rough cut and play it back.

import { ApiError, type ApiClient } from "./api";
import type { Storyboard } from "./storyboard";
import type {
  AssetInfo,
  CutListPayload,
  RouteResponse,
} from "./types";

const POLL_MS = 500;
const POLL_LIMIT = 240; // ~2 minutes

export interface RoutePanelHooks {
  getLens: () => string;
  onRoute: (route: RouteResponse) => void;
  report: (err: unknown) => void;
}

export class RoutePanel {
  readonly root: HTMLElement;
  selected = new Set<string>();
  route: RouteResponse | null = null;
  cutlist: CutListPayload | null = null;

  private listEl: HTMLElement;
  private planBtn: HTMLButtonElement;
  private renderBtn: HTMLButtonElement;
  private totalEl: HTMLElement;
  private statusEl: HTMLElement;
  private videoEl: HTMLVideoElement;
  private disposed = false;

  constructor(parent: HTMLElement, private service: ApiClient,
              private board: Storyboard, private hooks: RoutePanelHooks) {
    this.root = document.createElement("div");
    this.root.className = "route-panel";
    this.root.innerHTML = `
      <h3>Route planner</h3>
      <div class="clip-list"></div>
      <div class="row">
        <button class="plan-btn">Plan route</button>
        <span class="route-total"></span>
      </div>
      <div class="row">
        <button class="render-btn" disabled>Render rough cut</button>
        <span class="render-status"></span>
      </div>
      <video class="route-video" controls></video>`;
    this.listEl = this.root.querySelector(".clip-list") as HTMLElement;
    this.planBtn = this.root.querySelector(".plan-btn") as HTMLButtonElement;
    this.renderBtn = this.root.querySelector(".render-btn") as HTMLButtonElement;
    this.totalEl = this.root.querySelector(".route-total") as HTMLElement;
    this.statusEl = this.root.querySelector(".render-status") as HTMLElement;
    this.videoEl = this.root.querySelector(".route-video") as HTMLVideoElement;
    this.planBtn.addEventListener("click", () => void this.plan());
    this.renderBtn.addEventListener("click", () => void this.renderNow());
    parent.appendChild(this.root);
  }

  dispose(): void {
    this.disposed = true;
  }

  setAssets(assets: AssetInfo[]): void {
    this.listEl.replaceChildren();
    for (const a of assets) {
      const label = document.createElement("label");
      label.className = "clip-toggle";
      const box = document.createElement("input");
      box.type = "checkbox";
      box.dataset.video = a.id;
      box.addEventListener("change", () => {
        if (box.checked) this.selected.add(a.id);
        else this.selected.delete(a.id);
      });
      const text = document.createElement("span");
      text.textContent = `${a.id} (${a.duration_s.toFixed(0)}s)`;
      label.append(box, text);
      this.listEl.appendChild(label);
    }
  }

  async plan(): Promise<void> {
    const ids = [...this.selected];
    if (ids.length < 2) {
      this.hooks.report(new ApiError("EmptyInput", "pick at least two clips"));
      return;
    }
    try {
      const lens = this.hooks.getLens();
      this.route = await this.service.route(lens, ids);
      this.totalEl.textContent = `total ${this.route.total_weight.toFixed(4)}`;
      this.hooks.onRoute(this.route);
      this.cutlist = await this.service.cutlist(this.route);
      this.board.show(this.cutlist);
      this.renderBtn.disabled = false;
    } catch (err) {
      this.hooks.report(err);
    }
  }

  async renderNow(): Promise<void> {
    if (!this.cutlist) return;
    this.statusEl.textContent = "rendering…";
    try {
      const { job_id } = await this.service.render(this.cutlist);
      for (let i = 0; i < POLL_LIMIT && !this.disposed; i++) {
        const st = await this.service.renderStatus(job_id);
        if (st.status === "done") {
          this.statusEl.textContent = "done";
          this.videoEl.src = this.service.renderFileUrl(job_id);
          void this.videoEl.play?.()?.catch?.(() => undefined);
          return;
        }
        if (st.status === "error") {
          throw new ApiError("RenderFailed", st.error ?? "render failed");
        }
        await sleep(POLL_MS);
      }
      if (!this.disposed) {
        throw new ApiError("RenderTimeout", "render did not finish in time");
      }
    } catch (err) {
      this.statusEl.textContent = "";
      this.hooks.report(err);
    }
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
