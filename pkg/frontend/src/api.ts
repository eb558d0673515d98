// Thin typed client for the map service. Every method is a single HTTP
// round trip; errors arrive as {"code", "message"} bodies and are rethrown
// as ApiError so the shell can toast them uniformly.

import type {
  AssetsResponse,
  CutListPayload,
  HighlightResponse,
  LensesResponse,
  MapResponse,
  PathsResponse,
  RenderJobStatus,
  RouteResponse,
  SearchResponse,
  SemanticDistrictsResponse,
  StoryResponse,
} from "./types";

export class ApiError extends Error {
  code: string;
  status: number;

  constructor(code: string, message: string, status = 0) {
    super(message);
    this.code = code;
    this.status = status;
    // keep instanceof working when the target is ES5-ish
    Object.setPrototypeOf(this, ApiError.prototype);
  }
}

/**
 * What the UI needs from the backend. The production implementation is
 * HttpClient below; tests substitute a fixture-backed stand-in.
 */
export interface ApiClient {
  lenses(): Promise<LensesResponse>;
  assets(): Promise<AssetsResponse>;
  map(lens: string, signal?: AbortSignal): Promise<MapResponse>;
  paths(video: string, index: number, lens: string, k?: number): Promise<PathsResponse>;
  route(lens: string, videoIds: string[]): Promise<RouteResponse>;
  cutlist(route: RouteResponse): Promise<CutListPayload>;
  render(cutlist: CutListPayload): Promise<{ job_id: string }>;
  renderStatus(jobId: string): Promise<RenderJobStatus>;
  renderFileUrl(jobId: string): string;
  search(lens: string, prompt: string, k?: number): Promise<SearchResponse>;
  semanticDistricts(video: string, lens: string, seed: number): Promise<SemanticDistrictsResponse>;
  summarize(video: string, lens: string, seed: number, landmarkOrder: string[]): Promise<CutListPayload>;
  highlight(photo: Blob, lens: string): Promise<HighlightResponse>;
  story(lens: string, sentences: string[]): Promise<StoryResponse>;
  frameUrl(video: string, index: number): string;
}

async function parseError(res: Response): Promise<ApiError> {
  let code = `HTTP${res.status}`;
  let message = res.statusText;
  try {
    const body = await res.json();
    if (body && typeof body.code === "string") {
      code = body.code;
      message = body.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the HTTP status as the code
  }
  return new ApiError(code, message, res.status);
}

export class HttpClient implements ApiClient {
  constructor(private base: string) {}

  private async get<T>(path: string, signal?: AbortSignal): Promise<T> {
    let res: Response;
    try {
      res = await fetch(this.base + path, { signal });
    } catch (err) {
      if ((err as any)?.name === "AbortError") throw err;
      throw new ApiError("Unreachable", `cannot reach ${this.base}`, 0);
    }
    if (!res.ok) throw await parseError(res);
    return res.json() as Promise<T>;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    let res: Response;
    try {
      res = await fetch(this.base + path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError("Unreachable", `cannot reach ${this.base}`, 0);
    }
    if (!res.ok) throw await parseError(res);
    return res.json() as Promise<T>;
  }

  lenses() {
    return this.get<LensesResponse>("/api/lenses");
  }

  assets() {
    return this.get<AssetsResponse>("/api/assets");
  }

  map(lens: string, signal?: AbortSignal) {
    return this.get<MapResponse>(`/api/map?lens=${encodeURIComponent(lens)}`, signal);
  }

  paths(video: string, index: number, lens: string, k = 10) {
    const q = `lens=${encodeURIComponent(lens)}&k=${k}`;
    return this.get<PathsResponse>(
      `/api/node/${encodeURIComponent(video)}/${index}/paths?${q}`);
  }

  route(lens: string, videoIds: string[]) {
    return this.post<RouteResponse>("/api/route", { lens, video_ids: videoIds });
  }

  cutlist(route: RouteResponse) {
    return this.post<CutListPayload>("/api/cutlist", { route });
  }

  render(cutlist: CutListPayload) {
    return this.post<{ job_id: string }>("/api/render", { cutlist });
  }

  renderStatus(jobId: string) {
    return this.get<RenderJobStatus>(`/api/render/${encodeURIComponent(jobId)}`);
  }

  renderFileUrl(jobId: string): string {
    return `${this.base}/api/render/${encodeURIComponent(jobId)}/file`;
  }

  search(lens: string, prompt: string, k?: number) {
    const body: any = { lens, prompt };
    if (k !== undefined) body.k = k;
    return this.post<SearchResponse>("/api/search", body);
  }

  semanticDistricts(video: string, lens: string, seed: number) {
    const q = `lens=${encodeURIComponent(lens)}&seed=${seed}`;
    return this.get<SemanticDistrictsResponse>(
      `/api/summarize/${encodeURIComponent(video)}/districts?${q}`);
  }

  summarize(video: string, lens: string, seed: number, landmarkOrder: string[]) {
    return this.post<CutListPayload>("/api/summarize", {
      video_id: video, lens, seed, landmark_order: landmarkOrder,
    });
  }

  async highlight(photo: Blob, lens: string): Promise<HighlightResponse> {
    const form = new FormData();
    form.append("photo", photo, "photo.png");
    let res: Response;
    try {
      res = await fetch(`${this.base}/api/highlight?lens=${encodeURIComponent(lens)}`, {
        method: "POST",
        body: form,
      });
    } catch {
      throw new ApiError("Unreachable", `cannot reach ${this.base}`, 0);
    }
    if (!res.ok) throw await parseError(res);
    return res.json();
  }

  story(lens: string, sentences: string[]) {
    return this.post<StoryResponse>("/api/story", { lens, sentences });
  }

  frameUrl(video: string, index: number): string {
    return `${this.base}/api/frame/${encodeURIComponent(video)}/${index}`;
  }
}
