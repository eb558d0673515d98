// Screen-level flows against the recorded fixtures: hover details,
// summarization click-order, photo highlight, story matching.

import { afterEach, describe, expect, it } from "vitest";

import { App } from "../src/app";
import { countOps } from "./fake2d";
import { FixtureService } from "./service";

import highlightFx from "./fixtures/highlight_photo.json";
import storyFx from "./fixtures/story_semantic.json";
import sumCutFx from "./fixtures/summarize_cutlist_red_fade.json";
import sumDistrictsFx from "./fixtures/summarize_districts_red_fade.json";

const live: App[] = [];

async function bootedApp() {
  const host = document.createElement("div");
  document.body.appendChild(host);
  const svc = new FixtureService();
  const app = new App(host, svc, { animMs: 0 });
  live.push(app);
  await app.boot();
  return { app, svc };
}

afterEach(() => {
  for (const app of live.splice(0)) app.dispose();
  document.body.innerHTML = "";
});

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

describe("hover details", () => {
  it("shows thumbnail immediately, filename and timecode from the service", async () => {
    const { app } = await bootedApp();
    const p = app.view.mapData!.points.find(
      (q) => q.video_id === "red_fade" && q.frame_index === 0)!;
    const [sx, sy] = app.view.camera.worldToScreen(
      p.display_xy[0], p.display_xy[1]);
    app.view.route.canvas.dispatchEvent(new MouseEvent("pointermove", {
      clientX: sx, clientY: sy, bubbles: true,
    }));

    expect(app.state.hoverNode).toEqual(["red_fade", 0]);
    const thumb = app.root.querySelector(".details-thumb") as HTMLImageElement;
    expect(thumb.src).toContain("frame/red_fade/0");

    await sleep(200); // debounce + fixture fetch
    expect((app.root.querySelector(".details-name") as HTMLElement).textContent)
      .toBe("red_fade.json");
    expect((app.root.querySelector(".details-tc") as HTMLElement).textContent)
      .toBe("00:00:00.000");
  });
});

describe("summarize screen", () => {
  it("builds the storyboard from the landmark click order", async () => {
    const { app, svc } = await bootedApp();
    app.setScreen("summarize");
    const select = app.root.querySelector(".sum-video") as HTMLSelectElement;
    select.value = "red_fade";

    await app.summarizePanel.loadDistricts();
    const cards = app.root.querySelectorAll<HTMLElement>(".scene-card");
    expect(cards).toHaveLength(sumDistrictsFx.landmarks.length);
    expect((app.root.querySelector(".sum-info") as HTMLElement).textContent)
      .toContain(`k=${sumDistrictsFx.k}`);

    // clicks are a play order; repeats allowed
    const byId = new Map(
      [...cards].map((el) => [el.dataset.district as string, el]));
    byId.get("red_fade/s1")!.click();
    byId.get("red_fade/s0")!.click();
    byId.get("red_fade/s1")!.click();
    expect(app.summarizePanel.clickOrder)
      .toEqual(["red_fade/s1", "red_fade/s0", "red_fade/s1"]);

    await app.summarizePanel.build();
    expect(svc.lastArgs.summarize?.[3])
      .toEqual(["red_fade/s1", "red_fade/s0", "red_fade/s1"]);
    expect(app.root.querySelectorAll(".board-card"))
      .toHaveLength(sumCutFx.segments.length);
  });
});

describe("highlight screen", () => {
  it("draws the custom-landmark path for an uploaded photo", async () => {
    const { app } = await bootedApp();
    app.setScreen("highlight");

    const input = app.root.querySelector(".photo-input") as HTMLInputElement;
    const file = new File([new Uint8Array([1, 2, 3])], "photo.png",
                          { type: "image/png" });
    Object.defineProperty(input, "files", { value: [file], configurable: true });

    const fx = app.view.fx.canvas;
    await app.highlightPanel.upload();

    expect(app.view.photo?.nearest_frame).toEqual(highlightFx.nearest_frame);
    // one spoke per neighbor plus the star's two rings
    expect(countOps(fx, "lineTo")).toBe(highlightFx.neighbors.length);
    expect(countOps(fx, "arc")).toBeGreaterThanOrEqual(2);

    const info = (app.root.querySelector(".highlight-info") as HTMLElement)
      .textContent ?? "";
    expect(info).toContain("blue_sky");
    expect(info).toContain("0.0s");
    expect(info).toContain("5.0s");
  });
});

describe("story screen", () => {
  it("orders videos to the sentences and boards the cut list", async () => {
    const { app, svc } = await bootedApp();
    app.setScreen("story");
    const text = app.root.querySelector(".story-text") as HTMLTextAreaElement;
    text.value = "a bright red wall\n\nrolling green hills\n";

    await app.storyPanel.submit();

    expect(svc.lastArgs.story?.[1])
      .toEqual(["a bright red wall", "rolling green hills"]);
    const chips = [...app.root.querySelectorAll<HTMLElement>(".story-order .chip")]
      .map((el) => el.dataset.video);
    expect(chips).toEqual(storyFx.order);
    expect(app.root.querySelectorAll(".board-card"))
      .toHaveLength(storyFx.cutlist.segments.length);
    // the matched route lands on the overlay too: one vertex per video
    expect(app.view.routeKeys).toHaveLength(storyFx.order.length);
  });
});
