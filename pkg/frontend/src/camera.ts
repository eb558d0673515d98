// Pan/zoom camera: a similarity transform between the service's display
// coordinates ("world") and canvas pixels ("screen"). Pure presentation —
// world positions themselves always come from the API.

const ZOOM_MIN = 0.02;
const ZOOM_MAX = 50;

export interface Box {
  minX: number;
  minY: number;
  maxX: number;
  maxY: number;
}

export class Camera {
  x = 0; // world coords of the screen centre
  y = 0;
  zoom = 1; // pixels per world unit, always > 0
  viewW = 0;
  viewH = 0;

  setViewport(w: number, h: number): void {
    this.viewW = w;
    this.viewH = h;
  }

  worldToScreen(wx: number, wy: number): [number, number] {
    return [
      (wx - this.x) * this.zoom + this.viewW / 2,
      (wy - this.y) * this.zoom + this.viewH / 2,
    ];
  }

  screenToWorld(sx: number, sy: number): [number, number] {
    return [
      (sx - this.viewW / 2) / this.zoom + this.x,
      (sy - this.viewH / 2) / this.zoom + this.y,
    ];
  }

  panByPixels(dx: number, dy: number): void {
    this.x -= dx / this.zoom;
    this.y -= dy / this.zoom;
  }

  /** Zoom by a wheel-ish factor, keeping the world point under (sx, sy) fixed. */
  zoomAt(factor: number, sx: number, sy: number): void {
    const [wx, wy] = this.screenToWorld(sx, sy);
    this.zoom = clamp(this.zoom * factor, ZOOM_MIN, ZOOM_MAX);
    // solve for the camera centre that puts (wx, wy) back under the cursor
    this.x = wx - (sx - this.viewW / 2) / this.zoom;
    this.y = wy - (sy - this.viewH / 2) / this.zoom;
  }

  /** Fit a world box into the viewport with a little breathing room. */
  fit(box: Box, pad = 0.12): void {
    const w = Math.max(box.maxX - box.minX, 1e-6);
    const h = Math.max(box.maxY - box.minY, 1e-6);
    this.x = (box.minX + box.maxX) / 2;
    this.y = (box.minY + box.maxY) / 2;
    const fitW = (this.viewW * (1 - pad)) / w;
    const fitH = (this.viewH * (1 - pad)) / h;
    this.zoom = clamp(Math.min(fitW, fitH), ZOOM_MIN, ZOOM_MAX);
  }
}

function clamp(v: number, lo: number, hi: number): number {
  return v < lo ? lo : v > hi ? hi : v;
}
