// Application shell: builds the DOM skeleton, wires the map view to the
// panels, and owns the lens/screen switching logic. One instance per page.

import type { ApiClient } from "./api";
import { DetailsPanel } from "./details";
import { MapView } from "./mapview";
import { RoutePanel } from "./route";
import { SearchPanel, SummarizePanel, HighlightPanel, StoryPanel } from "./screens";
import { Gate, initialState, type ViewState } from "./state";
import { Storyboard } from "./storyboard";
import { Toasts } from "./toast";
import type {
  AssetInfo,
  FrameKey,
  LensInfo,
  RouteResponse,
} from "./types";

const SCREENS = ["explore", "route", "summarize", "highlight", "story"] as const;
export type ScreenName = (typeof SCREENS)[number];

export interface AppOptions {
  /** re-layout tween length passed to the map view; tests set 0 */
  animMs?: number;
}

export class App {
  readonly root: HTMLElement;
  readonly service: ApiClient;
  readonly state: ViewState;
  readonly view: MapView;
  readonly toasts: Toasts;
  readonly details: DetailsPanel;
  readonly board: Storyboard;
  readonly routePanel: RoutePanel;
  readonly searchPanel: SearchPanel;
  readonly summarizePanel: SummarizePanel;
  readonly highlightPanel: HighlightPanel;
  readonly storyPanel: StoryPanel;

  lenses: LensInfo[] = [];
  assets: AssetInfo[] = [];
  activeScreen: ScreenName = "explore";

  /** how many map fetches this app has issued (one per lens switch) */
  mapFetches = 0;

  private gate = new Gate();
  private mapAbort: AbortController | null = null;
  private lensBar: HTMLElement;
  private screenBar: HTMLElement;
  private panelHost: HTMLElement;

  constructor(root: HTMLElement, service: ApiClient, opts: AppOptions = {}) {
    this.root = root;
    this.service = service;
    this.state = initialState("color");

    root.classList.add("videomap-app");
    root.innerHTML = `
      <header class="topbar">
        <span class="brand">videomap</span>
        <nav class="lens-bar"></nav>
        <nav class="screen-bar"></nav>
      </header>
      <div class="main">
        <div class="stage"></div>
        <aside class="panel-host"></aside>
      </div>`;
    this.lensBar = root.querySelector(".lens-bar") as HTMLElement;
    this.screenBar = root.querySelector(".screen-bar") as HTMLElement;
    this.panelHost = root.querySelector(".panel-host") as HTMLElement;
    const stage = root.querySelector(".stage") as HTMLElement;

    this.toasts = new Toasts(root);
    this.view = new MapView(stage, { animMs: opts.animMs });
    this.board = new Storyboard(root, service);

    const report = (err: unknown) => this.toasts.error(err);
    const getLens = () => this.state.activeLens;
    const getTextLens = () => this.textLens();

    this.details = new DetailsPanel(this.panelHost, service, getLens);
    this.searchPanel = new SearchPanel(this.panelHost, service, this.view,
                                       { getTextLens, report });
    this.routePanel = new RoutePanel(this.panelHost, service, this.board, {
      getLens,
      onRoute: (route) => this.showRouteOverlay(route),
      report,
    });
    this.summarizePanel = new SummarizePanel(this.panelHost, service, this.board,
                                             { getTextLens, report });
    this.highlightPanel = new HighlightPanel(this.panelHost, service, this.view,
                                             { getTextLens, report });
    this.storyPanel = new StoryPanel(this.panelHost, service, this.board, {
      getTextLens,
      report,
      onRoute: (route) => this.showRouteOverlay(route),
    });

    this.view.onHover = (key) => this.hoverNode(key);
    this.view.onSelect = (key) => void this.selectNode(key);

    this.buildScreenBar();
    this.setScreen("explore");
  }

  dispose(): void {
    this.mapAbort?.abort();
    this.view.dispose();
    this.details.dispose();
    this.routePanel.dispose();
  }

  // -- boot ------------------------------------------------------------------

  async boot(): Promise<void> {
    try {
      const [lensResp, assetResp] = await Promise.all([
        this.service.lenses(),
        this.service.assets(),
      ]);
      this.lenses = lensResp.lenses;
      this.assets = assetResp.assets;
    } catch (err) {
      this.toasts.error(err);
      return;
    }
    this.board.setAssets(this.assets);
    this.routePanel.setAssets(this.assets);
    this.summarizePanel.setAssets(this.assets);
    this.buildLensBar();
    const first = this.lenses[0]?.name ?? "color";
    await this.switchLens(first);
  }

  // -- lens switching ----------------------------------------------------------

  /**
   * Fetch and show a lens map. Exactly one map request per call; if another
   * switch starts before this one resolves, the older response is discarded
   * (and aborted when the runtime supports it).
   */
  async switchLens(lens: string): Promise<void> {
    const ticket = this.gate.next();
    this.mapAbort?.abort();
    const ctl = typeof AbortController !== "undefined" ? new AbortController() : null;
    this.mapAbort = ctl;
    this.mapFetches += 1;

    let resp;
    try {
      resp = await this.service.map(lens, ctl?.signal ?? undefined);
    } catch (err) {
      if ((err as any)?.name === "AbortError") return; // superseded, already handled
      if (this.gate.isCurrent(ticket)) this.toasts.error(err);
      return;
    }
    if (!this.gate.isCurrent(ticket)) return; // stale response: drop it

    this.state.activeLens = lens;
    this.state.hoverNode = null;
    this.view.setMap(resp, true);
    this.details.reset();
    this.markActive(this.lensBar, "data-lens", lens);
  }

  /** Lens used for prompt/story/summarize text queries. */
  textLens(): string {
    const active = this.lenses.find((l) => l.name === this.state.activeLens);
    if (active?.supports_text) return active.name;
    const firstText = this.lenses.find((l) => l.supports_text);
    return firstText ? firstText.name : this.state.activeLens;
  }

  // -- screens -----------------------------------------------------------------

  setScreen(name: ScreenName): void {
    this.activeScreen = name;
    const visible: Record<ScreenName, HTMLElement[]> = {
      explore: [this.details.root, this.searchPanel.root],
      route: [this.routePanel.root],
      summarize: [this.summarizePanel.root],
      highlight: [this.highlightPanel.root, this.details.root],
      story: [this.storyPanel.root],
    };
    const shown = new Set(visible[name]);
    for (const el of [
      this.details.root, this.searchPanel.root, this.routePanel.root,
      this.summarizePanel.root, this.highlightPanel.root, this.storyPanel.root,
    ]) {
      el.classList.toggle("hidden", !shown.has(el));
    }
    this.markActive(this.screenBar, "data-screen", name);
  }

  // -- map events ---------------------------------------------------------------

  private hoverNode(key: FrameKey | null): void {
    this.state.hoverNode = key;
    this.details.show(key);
  }

  private async selectNode(key: FrameKey): Promise<void> {
    this.state.selectedNode = key;
    this.details.show(key);
    try {
      const resp = await this.details.pathsFor(key);
      this.view.setPaths(resp.edges);
    } catch (err) {
      this.toasts.error(err);
    }
  }

  /** Polyline overlay: one vertex per routed video, anchored at its landmark. */
  private showRouteOverlay(route: RouteResponse): void {
    const keys: FrameKey[] = [];
    for (const vid of route.order) {
      const lm = this.view.mapData?.landmarks.find((l) => l.district_id === vid);
      if (lm) {
        keys.push(lm.anchor);
        continue;
      }
      const row = this.view.rowFor(vid);
      if (row) keys.push([row.videoId, row.frames[0].frame_index]);
    }
    this.view.setRoute(keys);
  }

  // -- chrome ---------------------------------------------------------------------

  private buildLensBar(): void {
    this.lensBar.replaceChildren();
    for (const lens of this.lenses) {
      const btn = document.createElement("button");
      btn.className = "lens-tab";
      btn.dataset.lens = lens.name;
      btn.textContent = lens.supports_text ? `${lens.name} ✎` : lens.name;
      btn.addEventListener("click", () => {
        if (lens.name !== this.state.activeLens) void this.switchLens(lens.name);
      });
      this.lensBar.appendChild(btn);
    }
  }

  private buildScreenBar(): void {
    for (const name of SCREENS) {
      const btn = document.createElement("button");
      btn.className = "screen-tab";
      btn.dataset.screen = name;
      btn.textContent = name;
      btn.addEventListener("click", () => this.setScreen(name));
      this.screenBar.appendChild(btn);
    }
  }

  private markActive(bar: HTMLElement, attr: string, value: string): void {
    for (const child of Array.from(bar.children)) {
      const el = child as HTMLElement;
      el.classList.toggle("active", el.getAttribute(attr) === value);
    }
  }
}
