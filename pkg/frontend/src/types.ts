// Wire protocol and map document types, mirroring the engine's JSON
// exactly. The UI never computes geometry beyond rendering transforms;
// everything here is shaped by what the server sends.

export type WireEventType =
  | "ENTER"
  | "LEAVE"
  | "DWELL"
  | "AMBIENT_ON"
  | "AMBIENT_OFF"
  | "BUSY_TICK"
  | "ANSWER"
  | "NAV_STEP"
  | "NAV_REROUTE"
  | "NAV_ARRIVED"
  | "BEACON_CUE"
  | "BEACON_ARRIVED"
  | "ERROR";

export interface WireEvent {
  seq: number;
  type: WireEventType;
  payload: Record<string, unknown>;
}

export type FeatureKind = "intersection_node" | "street_edge" | "poi";

export interface Crossing {
  street: string;
  crosswalk: boolean;
  traffic_light: boolean;
  audio_signal: boolean;
}

export interface MapNode {
  id: string;
  position: [number, number];
  label?: string;
  intersection_type?: string;
  crossings?: Crossing[];
}

export interface MapEdge {
  id: string;
  endpoints: [string, string];
  street_name: string;
  paving?: string;
  slope?: number;
  one_way?: [string, string];
  accessibility?: string[];
}

export interface MapPoi {
  id: string;
  name: string;
  position: [number, number];
  category?: string;
  address?: string;
  discoverable?: boolean;
}

export interface MapDocument {
  version: number;
  frame: {
    map_name: string;
    corner_geocoords: [number, number][];
    width_m: number;
    height_m: number;
    scale_text: string;
  };
  nodes: MapNode[];
  edges: MapEdge[];
  pois: MapPoi[];
  area_description?: string;
}

// Request bodies for the session endpoints.

export interface FramePayload {
  t_ms: number;
  hand: "left" | "right" | "none";
  tip?: [number, number];
}

export type ControlAction =
  | "press"
  | "release"
  | "halt"
  | "pause"
  | "resume"
  | "stop_guidance"
  | "advance";

export interface ControlPayload {
  t_ms: number;
  action: ControlAction;
  utterance?: string;
}

export function parseEventLog(text: string): WireEvent[] {
  return text
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as WireEvent);
}
