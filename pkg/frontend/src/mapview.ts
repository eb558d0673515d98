// Canvas map: the scatter of frames in display coordinates, the per-video
// district rows, landmark handles, and the overlay drawings (paths, route
// polyline, search highlighting, photo paths).
//
// Three stacked layers keep repaints cheap:
//   base  — district row bars, points, landmark diamonds
//   fx    — hover/selection rings, path edges, scrub cursor, photo path
//   route — the planned-route polyline and its numbered stops
//
// All world coordinates here are the service's display_xy values. This
// component interpolates and projects them for presentation but never
// computes distances or layout of its own.

import { Camera } from "./camera";
import { Layer } from "./layer";
import { districtColor, UI } from "./palette";
import type {
  FrameKey,
  HighlightResponse,
  MapPoint,
  MapResponse,
  PathEdge,
  SearchResponse,
} from "./types";

const POINT_R = 4;
const LANDMARK_R = 7;
const ROW_BAR_PX = 16; // screen-space height of a district row bar
const HIT_POINT_PX = 9;
const HIT_LANDMARK_PX = 12;
const WHEEL_SPEED = 0.0015;

export interface RowModel {
  districtId: string;
  videoId: string;
  colorIndex: number;
  /** member points sorted by frame_index (chronological, left to right) */
  frames: MapPoint[];
  minX: number;
  maxX: number;
  y: number;
}

interface Tween {
  from: Map<string, [number, number]>;
  start: number;
}

export interface MapViewOptions {
  /** re-layout tween length; 0 snaps immediately (used by tests) */
  animMs?: number;
}

function keyOf(video: string, index: number): string {
  return `${video}\u0000${index}`;
}

export class MapView {
  readonly stage: HTMLElement;
  readonly camera = new Camera();
  readonly base: Layer;
  readonly fx: Layer;
  readonly route: Layer;

  mapData: MapResponse | null = null;
  rows: RowModel[] = [];

  hover: FrameKey | null = null;
  selection: FrameKey | null = null;
  pathEdges: PathEdge[] = [];
  routeKeys: FrameKey[] = [];
  search: SearchResponse | null = null;
  photo: HighlightResponse | null = null;

  onHover: ((key: FrameKey | null) => void) | null = null;
  onSelect: ((key: FrameKey) => void) | null = null;
  onScrub: ((key: FrameKey) => void) | null = null;

  private points = new Map<string, MapPoint>();
  private rowByVideo = new Map<string, RowModel>();
  private rowByDistrict = new Map<string, RowModel>();
  private hoverRow: RowModel | null = null;
  private scrubRow: RowModel | null = null;
  private scrubX: number | null = null; // world x of the scrub cursor
  private panFrom: [number, number] | null = null;
  private panMoved = false;
  private tween: Tween | null = null;
  private tweenHandle = 0;
  private animMs: number;
  private disposed = false;

  constructor(stage: HTMLElement, opts: MapViewOptions = {}) {
    this.stage = stage;
    this.animMs = opts.animMs ?? 350;
    this.base = new Layer(stage, "base", 1);
    this.fx = new Layer(stage, "fx", 2);
    this.route = new Layer(stage, "route", 3);
    this.resize();

    // fx sits on top, so it owns pointer input for the whole stack
    const c = this.route.canvas;
    c.style.touchAction = "none";
    c.addEventListener("pointermove", (e) => this.pointerMove(e));
    c.addEventListener("pointerdown", (e) => this.pointerDown(e));
    c.addEventListener("pointerup", (e) => this.pointerUp(e));
    c.addEventListener("pointerleave", () => this.pointerLeave());
    c.addEventListener("wheel", (e) => this.wheel(e), { passive: false });
    c.addEventListener("dblclick", () => {
      this.fitToData();
      this.invalidateAll();
      this.draw();
    });
  }

  dispose(): void {
    this.disposed = true;
    if (this.tweenHandle && typeof cancelAnimationFrame === "function") {
      cancelAnimationFrame(this.tweenHandle);
    }
  }

  resize(): void {
    // jsdom reports 0x0 for everything; fall back so tests get geometry
    const w = this.stage.clientWidth || 960;
    const h = this.stage.clientHeight || 600;
    this.camera.setViewport(w, h);
    for (const layer of [this.base, this.fx, this.route]) layer.resize(w, h);
  }

  // -- data ----------------------------------------------------------------

  setMap(data: MapResponse, animate = false): void {
    const previous = this.points;
    this.mapData = data;
    this.points = new Map();
    for (const p of data.points) {
      this.points.set(keyOf(p.video_id, p.frame_index), p);
    }
    this.buildRows(data);

    // overlays keyed to the old lens no longer mean anything
    this.pathEdges = [];
    this.photo = null;
    this.hover = null;
    this.hoverRow = null;

    if (previous.size === 0) this.fitToData();

    const wantTween =
      animate && this.animMs > 0 && previous.size > 0 &&
      typeof requestAnimationFrame === "function";
    if (wantTween) {
      const from = new Map<string, [number, number]>();
      for (const [k, p] of previous) from.set(k, p.display_xy);
      this.tween = { from, start: now() };
      this.runTween();
    } else {
      this.tween = null;
    }
    this.invalidateAll();
    this.draw();
  }

  private buildRows(data: MapResponse): void {
    this.rows = [];
    this.rowByVideo.clear();
    this.rowByDistrict.clear();
    for (const d of data.districts) {
      const frames: MapPoint[] = [];
      for (const [vid, idx] of d.members) {
        const p = this.points.get(keyOf(vid, idx));
        if (p) frames.push(p);
      }
      if (frames.length === 0) continue;
      frames.sort((a, b) => a.frame_index - b.frame_index);
      let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
      for (const p of frames) {
        const [x, y] = p.display_xy;
        if (x < minX) minX = x;
        if (x > maxX) maxX = x;
        if (y < minY) minY = y;
        if (y > maxY) maxY = y;
      }
      const row: RowModel = {
        districtId: d.id,
        videoId: frames[0].video_id,
        colorIndex: d.color_index,
        frames,
        minX,
        maxX,
        y: (minY + maxY) / 2,
      };
      this.rows.push(row);
      this.rowByVideo.set(row.videoId, row);
      this.rowByDistrict.set(d.id, row);
    }
  }

  setPaths(edges: PathEdge[]): void {
    this.pathEdges = edges;
    this.photo = null;
    this.fx.invalidate();
    this.draw();
  }

  setSelection(key: FrameKey | null): void {
    this.selection = key;
    this.fx.invalidate();
    this.draw();
  }

  setRoute(keys: FrameKey[]): void {
    this.routeKeys = keys;
    this.route.invalidate();
    this.draw();
  }

  setSearch(result: SearchResponse | null): void {
    this.search = result;
    this.base.invalidate();
    this.fx.invalidate();
    this.draw();
  }

  setPhotoPath(result: HighlightResponse | null): void {
    this.photo = result;
    this.pathEdges = [];
    this.fx.invalidate();
    this.draw();
  }

  /** Videos currently highlighted by the active prompt search. */
  highlightedVideos(): Set<string> {
    return new Set(this.search ? this.search.highlighted : []);
  }

  rowFor(videoId: string): RowModel | undefined {
    return this.rowByVideo.get(videoId);
  }

  fitToData(): void {
    if (this.points.size === 0) return;
    let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
    for (const p of this.points.values()) {
      const [x, y] = p.display_xy;
      if (x < minX) minX = x;
      if (y < minY) minY = y;
      if (x > maxX) maxX = x;
      if (y > maxY) maxY = y;
    }
    this.camera.fit({ minX, minY, maxX, maxY });
  }

  // -- geometry ------------------------------------------------------------

  /** Current world position of a point (mid-tween it is interpolated). */
  worldPos(p: MapPoint): [number, number] {
    if (this.tween) {
      const from = this.tween.from.get(keyOf(p.video_id, p.frame_index));
      if (from) {
        const t = ease(Math.min(1, (now() - this.tween.start) / this.animMs));
        return [
          from[0] + (p.display_xy[0] - from[0]) * t,
          from[1] + (p.display_xy[1] - from[1]) * t,
        ];
      }
    }
    return p.display_xy;
  }

  screenPos(p: MapPoint): [number, number] {
    const [wx, wy] = this.worldPos(p);
    return this.camera.worldToScreen(wx, wy);
  }

  private pointAt(sx: number, sy: number): MapPoint | null {
    let best: MapPoint | null = null;
    let bestD = HIT_POINT_PX * HIT_POINT_PX;
    for (const p of this.points.values()) {
      const [x, y] = this.screenPos(p);
      const d = (x - sx) * (x - sx) + (y - sy) * (y - sy);
      if (d <= bestD) {
        bestD = d;
        best = p;
      }
    }
    return best;
  }

  private landmarkRowAt(sx: number, sy: number): RowModel | null {
    if (!this.mapData) return null;
    for (const lm of this.mapData.landmarks) {
      const p = this.points.get(keyOf(lm.anchor[0], lm.anchor[1]));
      if (!p) continue;
      const [x, y] = this.screenPos(p);
      if (Math.abs(x - sx) <= HIT_LANDMARK_PX && Math.abs(y - sy) <= HIT_LANDMARK_PX) {
        return this.rowByDistrict.get(lm.district_id) ?? null;
      }
    }
    return null;
  }

  private rowAt(sx: number, sy: number): RowModel | null {
    for (const row of this.rows) {
      const [x0, y] = this.camera.worldToScreen(row.minX, row.y);
      const [x1] = this.camera.worldToScreen(row.maxX, row.y);
      if (sx >= x0 - LANDMARK_R && sx <= x1 + LANDMARK_R &&
          Math.abs(sy - y) <= ROW_BAR_PX / 2 + 2) {
        return row;
      }
    }
    return null;
  }

  /** Linear pointer-x -> frame mapping across the row's span. */
  scrubIndexAt(row: RowModel, sx: number): MapPoint {
    const [wx] = this.camera.screenToWorld(sx, 0);
    const span = row.maxX - row.minX;
    const frac = span > 0 ? (wx - row.minX) / span : 0;
    const n = row.frames.length;
    let i = Math.round(frac * (n - 1));
    if (i < 0) i = 0;
    if (i > n - 1) i = n - 1;
    return row.frames[i];
  }

  // -- input ---------------------------------------------------------------

  private local(e: MouseEvent): [number, number] {
    const rect = this.route.canvas.getBoundingClientRect();
    return [e.clientX - rect.left, e.clientY - rect.top];
  }

  private pointerDown(e: PointerEvent): void {
    const [sx, sy] = this.local(e);
    const scrub = this.landmarkRowAt(sx, sy);
    if (scrub) {
      this.scrubRow = scrub;
      this.applyScrub(sx);
      try {
        this.route.canvas.setPointerCapture?.(e.pointerId);
      } catch {
        // jsdom has no pointer capture; dragging still works
      }
      return;
    }
    const hit = this.pointAt(sx, sy);
    if (hit) {
      const key: FrameKey = [hit.video_id, hit.frame_index];
      this.setSelection(key);
      this.onSelect?.(key);
      return;
    }
    this.panFrom = [sx, sy];
    this.panMoved = false;
  }

  private pointerMove(e: PointerEvent): void {
    const [sx, sy] = this.local(e);
    if (this.scrubRow) {
      this.applyScrub(sx);
      return;
    }
    if (this.panFrom) {
      const dx = sx - this.panFrom[0];
      const dy = sy - this.panFrom[1];
      if (Math.abs(dx) + Math.abs(dy) > 1) this.panMoved = true;
      this.camera.panByPixels(dx, dy);
      this.panFrom = [sx, sy];
      this.invalidateAll();
      this.draw();
      return;
    }
    const hit = this.pointAt(sx, sy);
    const nextKey: FrameKey | null = hit ? [hit.video_id, hit.frame_index] : null;
    const row = hit ? this.rowByVideo.get(hit.video_id) ?? null : this.rowAt(sx, sy);
    const rowChanged = row !== this.hoverRow;
    const keyChanged = !sameKey(nextKey, this.hover);
    this.hoverRow = row;
    this.hover = nextKey;
    if (keyChanged) this.onHover?.(nextKey);
    if (rowChanged) this.base.invalidate(); // hover-raise reorders the rows
    if (keyChanged || rowChanged) {
      this.fx.invalidate();
      this.draw();
    }
  }

  private pointerUp(e: PointerEvent): void {
    if (this.scrubRow) {
      this.scrubRow = null;
      this.scrubX = null;
      this.fx.invalidate();
      this.draw();
      return;
    }
    this.panFrom = null;
  }

  private pointerLeave(): void {
    this.panFrom = null;
    if (this.hover !== null || this.hoverRow !== null) {
      this.hover = null;
      this.hoverRow = null;
      this.onHover?.(null);
      this.base.invalidate();
      this.fx.invalidate();
      this.draw();
    }
  }

  private wheel(e: WheelEvent): void {
    e.preventDefault();
    const [sx, sy] = this.local(e);
    this.camera.zoomAt(Math.exp(-e.deltaY * WHEEL_SPEED), sx, sy);
    this.invalidateAll();
    this.draw();
  }

  private applyScrub(sx: number): void {
    const row = this.scrubRow;
    if (!row) return;
    const p = this.scrubIndexAt(row, sx);
    [this.scrubX] = this.worldPos(p);
    const key: FrameKey = [p.video_id, p.frame_index];
    if (!sameKey(key, this.hover)) {
      this.hover = key;
      this.onHover?.(key);
      this.onScrub?.(key);
    }
    this.fx.invalidate();
    this.draw();
  }

  // -- drawing -------------------------------------------------------------

  invalidateAll(): void {
    this.base.invalidate();
    this.fx.invalidate();
    this.route.invalidate();
  }

  draw(): void {
    if (this.disposed) return;
    this.base.repaint((ctx) => this.drawBase(ctx));
    this.fx.repaint((ctx) => this.drawFx(ctx));
    this.route.repaint((ctx) => this.drawRoute(ctx));
  }

  private alphaFor(videoId: string): number {
    if (!this.search) return 1;
    if (this.search.highlighted.includes(videoId)) return 1;
    const score = this.search.per_video_scores[videoId] ?? 0;
    const s = score < 0 ? 0 : score > 1 ? 1 : score;
    return 0.12 + 0.7 * s; // fade non-hits in proportion to their score
  }

  private drawBase(ctx: CanvasRenderingContext2D): void {
    if (!this.mapData) return;

    // rows first, hovered row last so it raises above overlapping ones
    const order = this.rows.filter((r) => r !== this.hoverRow);
    if (this.hoverRow) order.push(this.hoverRow);
    for (const row of order) {
      const hovered = row === this.hoverRow;
      const [x0, y] = this.camera.worldToScreen(row.minX, row.y);
      const [x1] = this.camera.worldToScreen(row.maxX, row.y);
      ctx.globalAlpha = this.alphaFor(row.videoId);
      ctx.fillStyle = hovered ? UI.rowFillHover : UI.rowFill;
      ctx.fillRect(x0 - POINT_R * 2, y - ROW_BAR_PX / 2,
                   (x1 - x0) + POINT_R * 4, ROW_BAR_PX);
      if (hovered) {
        ctx.strokeStyle = districtColor(row.colorIndex);
        ctx.strokeRect(x0 - POINT_R * 2, y - ROW_BAR_PX / 2,
                       (x1 - x0) + POINT_R * 4, ROW_BAR_PX);
      }
      ctx.fillStyle = districtColor(row.colorIndex);
      ctx.font = "11px system-ui, sans-serif";
      ctx.fillText(row.videoId, x0 - POINT_R * 2, y - ROW_BAR_PX / 2 - 4);

      for (const p of row.frames) {
        const [px, py] = this.screenPos(p);
        ctx.beginPath();
        ctx.arc(px, py, hovered ? POINT_R + 1 : POINT_R, 0, Math.PI * 2);
        ctx.fillStyle = districtColor(row.colorIndex);
        ctx.fill();
        ctx.strokeStyle = UI.pointStroke;
        ctx.stroke();
      }
    }
    ctx.globalAlpha = 1;

    // landmark handles: diamonds on the anchor frames
    for (const lm of this.mapData.landmarks) {
      const p = this.points.get(keyOf(lm.anchor[0], lm.anchor[1]));
      if (!p) continue;
      const [x, y] = this.screenPos(p);
      ctx.beginPath();
      ctx.moveTo(x, y - LANDMARK_R);
      ctx.lineTo(x + LANDMARK_R, y);
      ctx.lineTo(x, y + LANDMARK_R);
      ctx.lineTo(x - LANDMARK_R, y);
      ctx.closePath();
      ctx.strokeStyle = UI.landmark;
      ctx.lineWidth = 1.5;
      ctx.stroke();
      ctx.lineWidth = 1;
    }
  }

  private drawFx(ctx: CanvasRenderingContext2D): void {
    // path edges from the selected node: one stroked segment per edge
    ctx.strokeStyle = UI.pathEdge;
    ctx.lineWidth = 1.5;
    for (const edge of this.pathEdges) {
      const a = this.points.get(keyOf(edge.from[0], edge.from[1]));
      const b = this.points.get(keyOf(edge.to[0], edge.to[1]));
      if (!a || !b) continue;
      const [ax, ay] = this.screenPos(a);
      const [bx, by] = this.screenPos(b);
      ctx.beginPath();
      ctx.moveTo(ax, ay);
      ctx.lineTo(bx, by);
      ctx.stroke();
    }

    // custom landmark from an uploaded photo: star node + its neighbors
    if (this.photo) {
      const anchor = this.points.get(
        keyOf(this.photo.nearest_frame[0], this.photo.nearest_frame[1]));
      if (anchor) {
        const [ax, ay] = this.screenPos(anchor);
        ctx.strokeStyle = UI.highlightRing;
        for (const nb of this.photo.neighbors) {
          const p = this.points.get(keyOf(nb.frame[0], nb.frame[1]));
          if (!p) continue;
          const [bx, by] = this.screenPos(p);
          ctx.beginPath();
          ctx.moveTo(ax, ay);
          ctx.lineTo(bx, by);
          ctx.stroke();
        }
        ctx.beginPath();
        ctx.arc(ax, ay, LANDMARK_R + 3, 0, Math.PI * 2);
        ctx.stroke();
        ctx.beginPath();
        ctx.arc(ax, ay, 2.5, 0, Math.PI * 2);
        ctx.fillStyle = UI.highlightRing;
        ctx.fill();
      }
    }
    ctx.lineWidth = 1;

    // prompt-search rings on each highlighted video's best frame
    if (this.search) {
      ctx.strokeStyle = UI.highlightRing;
      ctx.lineWidth = 2;
      for (const vid of this.search.highlighted) {
        const key = this.search.best_frame[vid];
        if (!key) continue;
        const p = this.points.get(keyOf(key[0], key[1]));
        if (!p) continue;
        const [x, y] = this.screenPos(p);
        ctx.beginPath();
        ctx.arc(x, y, POINT_R + 4, 0, Math.PI * 2);
        ctx.stroke();
      }
      ctx.lineWidth = 1;
    }

    if (this.hover) {
      const p = this.points.get(keyOf(this.hover[0], this.hover[1]));
      if (p) {
        const [x, y] = this.screenPos(p);
        ctx.beginPath();
        ctx.arc(x, y, POINT_R + 3, 0, Math.PI * 2);
        ctx.strokeStyle = UI.hoverRing;
        ctx.stroke();
      }
    }

    if (this.selection) {
      const p = this.points.get(keyOf(this.selection[0], this.selection[1]));
      if (p) {
        const [x, y] = this.screenPos(p);
        ctx.beginPath();
        ctx.arc(x, y, POINT_R + 3, 0, Math.PI * 2);
        ctx.strokeStyle = UI.selectRing;
        ctx.lineWidth = 2;
        ctx.stroke();
        ctx.lineWidth = 1;
      }
    }

    // scrub cursor: a thin vertical bar over the scrubbed row
    if (this.scrubRow && this.scrubX !== null) {
      const [x, y] = this.camera.worldToScreen(this.scrubX, this.scrubRow.y);
      ctx.fillStyle = UI.scrubCursor;
      ctx.fillRect(x - 1, y - ROW_BAR_PX, 2, ROW_BAR_PX * 2);
    }
  }

  private drawRoute(ctx: CanvasRenderingContext2D): void {
    if (this.routeKeys.length === 0) return;
    const pts: [number, number][] = [];
    for (const key of this.routeKeys) {
      const p = this.points.get(keyOf(key[0], key[1]));
      if (p) pts.push(this.screenPos(p));
    }
    if (pts.length === 0) return;

    ctx.strokeStyle = UI.routeLine;
    ctx.lineWidth = 2;
    ctx.setLineDash([7, 5]);
    ctx.beginPath();
    ctx.moveTo(pts[0][0], pts[0][1]);
    for (let i = 1; i < pts.length; i++) ctx.lineTo(pts[i][0], pts[i][1]);
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.lineWidth = 1;

    // one numbered stop marker per routed video
    for (let i = 0; i < pts.length; i++) {
      const [x, y] = pts[i];
      ctx.beginPath();
      ctx.arc(x, y, LANDMARK_R, 0, Math.PI * 2);
      ctx.fillStyle = UI.routeDot;
      ctx.fill();
      ctx.strokeStyle = UI.routeLine;
      ctx.stroke();
      ctx.fillStyle = "#332b00";
      ctx.font = "bold 10px system-ui, sans-serif";
      ctx.fillText(String(i + 1), x - 3, y + 3);
    }
  }

  private runTween(): void {
    const step = () => {
      if (this.disposed || !this.tween) return;
      const t = (now() - this.tween.start) / this.animMs;
      if (t >= 1) {
        this.tween = null;
      } else {
        this.tweenHandle = requestAnimationFrame(step);
      }
      this.invalidateAll();
      this.draw();
    };
    this.tweenHandle = requestAnimationFrame(step);
  }
}

function sameKey(a: FrameKey | null, b: FrameKey | null): boolean {
  if (a === null || b === null) return a === b;
  return a[0] === b[0] && a[1] === b[1];
}

function ease(t: number): number {
  return t * t * (3 - 2 * t); // smoothstep
}

function now(): number {
  return typeof performance !== "undefined" ? performance.now() : Date.now();
}
