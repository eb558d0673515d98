// Wire types for the map service. These mirror the JSON the HTTP API emits,
// field for field — the UI never derives geometry or distances on its own,
// it just draws what arrives.

/** (video_id, frame_index) pair, the universal node key. */
export type FrameKey = [string, number];

export interface LensInfo {
  name: string;
  supports_text: boolean;
}

export interface LensesResponse {
  lenses: LensInfo[];
}

export interface AssetInfo {
  id: string;
  path: string;
  filename: string;
  duration_s: number;
  fps: number;
  frame_count: number;
  width: number;
  height: number;
}

export interface AssetsResponse {
  assets: AssetInfo[];
}

export interface MapPoint {
  video_id: string;
  frame_index: number;
  raw_xy: [number, number];
  display_xy: [number, number];
}

export interface District {
  id: string;
  color_index: number;
  kind: string;
  members: FrameKey[];
}

export interface Landmark {
  district_id: string;
  anchor: FrameKey;
  thumbnail_ref: string;
}

export interface MapResponse {
  lens: string;
  points: MapPoint[];
  districts: District[];
  landmarks: Landmark[];
}

export interface NodeDetailsPayload {
  thumbnail_ref: string;
  filename: string;
  timecode: string;
}

export interface PathEdge {
  lens: string;
  from: FrameKey;
  to: FrameKey;
  distance: number;
}

export interface PathsResponse {
  lens: string;
  query: FrameKey;
  node: NodeDetailsPayload;
  edges: PathEdge[];
}

export interface RouteResponse {
  lens: string;
  order: string[];
  transitions: PathEdge[];
  total_weight: number;
}

export interface CutSegment {
  video_id: string;
  source_path: string;
  entry_time_s: number;
  exit_time_s: number;
  direction: "forward" | "reverse";
}

export interface CutListPayload {
  lens: string;
  segments: CutSegment[];
  version: number;
}

export interface SearchResponse {
  prompt: string;
  lens: string;
  per_video_scores: Record<string, number>;
  highlighted: string[];
  best_frame: Record<string, FrameKey>;
}

export interface SemanticDistrictsResponse {
  video_id: string;
  lens: string;
  k: number;
  wcss_curve: number[];
  districts: { id: string; color_index: number; members: FrameKey[] }[];
  landmarks: Landmark[];
}

export interface HighlightResponse {
  lens: string;
  nearest_frame: FrameKey;
  clip: { start_s: number; end_s: number };
  neighbors: { frame: FrameKey; distance: number }[];
}

export interface StoryResponse {
  order: string[];
  route: RouteResponse;
  cutlist: CutListPayload;
}

export interface RenderJobStatus {
  job_id: string;
  status: "queued" | "running" | "done" | "error";
  error: string | null;
}
