// jsdom ships no canvas implementation, so tests install this recording
// stub: every 2d-context method call and style assignment is appended to a
// per-canvas op log. Assertions then count draw primitives (arcs, lineTo,
// ...) instead of inspecting pixels.

export interface Op {
  op: string;
  args: unknown[];
}

const METHODS = [
  "save", "restore", "scale", "rotate", "translate", "transform",
  "setTransform", "resetTransform", "clearRect", "fillRect", "strokeRect",
  "beginPath", "closePath", "moveTo", "lineTo", "bezierCurveTo",
  "quadraticCurveTo", "arc", "arcTo", "ellipse", "rect", "roundRect",
  "fill", "stroke", "clip", "fillText", "strokeText", "drawImage",
  "setLineDash", "putImageData",
];

const STYLE_PROPS = [
  "fillStyle", "strokeStyle", "lineWidth", "font", "globalAlpha",
  "lineCap", "lineJoin", "textAlign", "textBaseline", "globalCompositeOperation",
];

const registry = new WeakMap<HTMLCanvasElement, any>();

function makeContext(canvas: HTMLCanvasElement): any {
  const ops: Op[] = [];
  const ctx: any = { canvas, __ops: ops };
  for (const name of METHODS) {
    ctx[name] = (...args: unknown[]) => {
      ops.push({ op: name, args });
    };
  }
  const styles: Record<string, unknown> = {};
  for (const prop of STYLE_PROPS) {
    styles[prop] = prop === "globalAlpha" || prop === "lineWidth" ? 1 : "";
    Object.defineProperty(ctx, prop, {
      get: () => styles[prop],
      set: (v) => {
        styles[prop] = v;
        ops.push({ op: `set:${prop}`, args: [v] });
      },
    });
  }
  ctx.measureText = (text: string) => ({ width: String(text).length * 7 });
  ctx.getLineDash = () => [];
  ctx.createLinearGradient = () => ({ addColorStop: () => undefined });
  ctx.createRadialGradient = () => ({ addColorStop: () => undefined });
  ctx.getImageData = (x: number, y: number, w: number, h: number) => ({
    data: new Uint8ClampedArray(w * h * 4), width: w, height: h,
  });
  ctx.isPointInPath = () => false;
  ctx.getTransform = () => ({ a: 1, b: 0, c: 0, d: 1, e: 0, f: 0 });
  return ctx;
}

export function installFake2D(): void {
  (HTMLCanvasElement.prototype as any).getContext = function (kind: string) {
    if (kind !== "2d") return null;
    let ctx = registry.get(this);
    if (!ctx) {
      ctx = makeContext(this);
      registry.set(this, ctx);
    }
    return ctx;
  };
}

export function opsOf(canvas: HTMLCanvasElement, name?: string): Op[] {
  const ctx = registry.get(canvas);
  if (!ctx) return [];
  const ops: Op[] = ctx.__ops;
  return name ? ops.filter((o) => o.op === name) : ops;
}

export function countOps(canvas: HTMLCanvasElement, name: string): number {
  return opsOf(canvas, name).length;
}

export function clearOps(canvas: HTMLCanvasElement): void {
  const ctx = registry.get(canvas);
  if (ctx) ctx.__ops.length = 0;
}
