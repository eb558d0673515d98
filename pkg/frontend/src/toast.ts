// Error toasts. Every ApiError in the app funnels through here: code badge,
// message, and an explicit dismiss button (they do not auto-hide — a failed
// route plan should not vanish while you read it).

import { ApiError } from "./api";

export class Toasts {
  readonly root: HTMLElement;

  constructor(parent: HTMLElement) {
    this.root = document.createElement("div");
    this.root.className = "toasts";
    parent.appendChild(this.root);
  }

  error(err: unknown): void {
    const code = err instanceof ApiError ? err.code : "Error";
    const message = err instanceof Error ? err.message : String(err);
    this.show(code, message);
  }

  show(code: string, message: string): void {
    const el = document.createElement("div");
    el.className = "toast";
    el.dataset.code = code;

    const badge = document.createElement("span");
    badge.className = "toast-code";
    badge.textContent = code;

    const text = document.createElement("span");
    text.className = "toast-msg";
    text.textContent = message;

    const close = document.createElement("button");
    close.className = "toast-close";
    close.textContent = "×";
    close.addEventListener("click", () => el.remove());

    el.append(badge, text, close);
    this.root.appendChild(el);
  }

  get count(): number {
    return this.root.children.length;
  }
}
