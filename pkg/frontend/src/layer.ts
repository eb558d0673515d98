// Stacked-canvas layer. The map is composited from a few of these so a
// hover repaint doesn't force the whole scatter to redraw: each layer
// tracks its own dirty bit and the shell repaints only what changed.

export class Layer {
  readonly canvas: HTMLCanvasElement;
  readonly ctx: CanvasRenderingContext2D;
  private dirty = true;

  constructor(parent: HTMLElement, name: string, zIndex: number) {
    this.canvas = document.createElement("canvas");
    this.canvas.className = `layer layer-${name}`;
    this.canvas.dataset.layer = name;
    this.canvas.style.position = "absolute";
    this.canvas.style.left = "0";
    this.canvas.style.top = "0";
    this.canvas.style.zIndex = String(zIndex);
    parent.appendChild(this.canvas);
    const ctx = this.canvas.getContext("2d");
    if (!ctx) throw new Error(`no 2d context for layer ${name}`);
    this.ctx = ctx;
  }

  resize(w: number, h: number): void {
    if (this.canvas.width === w && this.canvas.height === h) return;
    this.canvas.width = w;
    this.canvas.height = h;
    this.dirty = true;
  }

  invalidate(): void {
    this.dirty = true;
  }

  get needsUpdate(): boolean {
    return this.dirty;
  }

  /** Clear and hand the context to the draw callback if dirty. */
  repaint(draw: (ctx: CanvasRenderingContext2D) => void): void {
    if (!this.dirty) return;
    this.ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    draw(this.ctx);
    this.dirty = false;
  }
}
