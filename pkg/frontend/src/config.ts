// The one configurable thing in this app: where the map service lives.

const DEFAULT_BASE = "http://127.0.0.1:8080";

/**
 * Service base URL. A page can pin it before the bundle loads
 * (`window.VIDEOMAP_API = "..."`), a build can bake it in via
 * VITE_API_BASE, and otherwise we assume a local service.
 */
export function apiBase(): string {
  const win = (globalThis as any).VIDEOMAP_API;
  if (typeof win === "string" && win.length > 0) return win.replace(/\/$/, "");
  const env = import.meta.env?.VITE_API_BASE;
  if (typeof env === "string" && env.length > 0) return env.replace(/\/$/, "");
  return DEFAULT_BASE;
}
