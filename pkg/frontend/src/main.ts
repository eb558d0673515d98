// Entry point: construct the app against the configured service and boot.

import { HttpClient } from "./api";
import { App } from "./app";
import { apiBase } from "./config";
import "./styles.css";

function start(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const app = new App(root, new HttpClient(apiBase()));
  void app.boot();
  (window as any).videomapApp = app; // console access for poking around
}

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", start);
} else {
  start();
}
