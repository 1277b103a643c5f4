// Client view state, driven entirely by wire events plus the user's own
// local commands. No spatial computation happens here: the highlight is
// whatever the server last said ENTER/LEAVE about, the pending flag is
// whatever the push-to-talk window and BUSY_TICKs say.

import { transcriptLine } from "./transcript.js";
import type { FeatureKind, WireEvent } from "./types.js";

export interface Highlight {
  kind: FeatureKind;
  featureId: string;
  text: string;
}

export interface NavOverlay {
  mode: "street_by_street";
  banner: string;
  step?: number;
  of?: number;
  destination?: string;
  rerouted: boolean;
}

export interface BeaconOverlay {
  mode: "fly_me_there";
  target: string;
  direction: string;
  distanceM: number;
}

export type GuidanceOverlay = NavOverlay | BeaconOverlay;

export interface Bookmark {
  name: string;
  position: [number, number];
}

export interface ViewState {
  pointer: [number, number] | null;
  highlight: Highlight | null;
  ambient: boolean;
  pending: boolean;
  busyTicks: number;
  guidance: GuidanceOverlay | null;
  arrivalChime: boolean;
  log: string[];
  errors: string[];
  bookmarks: Bookmark[];
  lastSeq: number;
}

export function initialState(): ViewState {
  return {
    pointer: null,
    highlight: null,
    ambient: false,
    pending: false,
    busyTicks: 0,
    guidance: null,
    arrivalChime: false,
    log: [],
    errors: [],
    bookmarks: [],
    lastSeq: 0,
  };
}

export type Command =
  | { type: "pointer"; position: [number, number] | null }
  | { type: "press" }
  | { type: "bookmark"; name: string };

export function applyCommand(state: ViewState, command: Command): ViewState {
  switch (command.type) {
    case "pointer":
      return { ...state, pointer: command.position };
    case "press":
      return { ...state, pending: true, busyTicks: 0 };
    case "bookmark": {
      if (!state.pointer) return state;
      const mark: Bookmark = { name: command.name, position: state.pointer };
      return { ...state, bookmarks: [...state.bookmarks, mark] };
    }
  }
}

export function applyEvent(state: ViewState, event: WireEvent): ViewState {
  const p = event.payload;
  const next: ViewState = {
    ...state,
    log: [...state.log, transcriptLine(event)],
    lastSeq: event.seq,
  };
  switch (event.type) {
    case "ENTER":
      next.highlight = {
        kind: p["kind"] as FeatureKind,
        featureId: p["feature_id"] as string,
        text: (p["text"] as string) ?? "",
      };
      break;
    case "DWELL":
      if (next.highlight && next.highlight.featureId === p["feature_id"]) {
        next.highlight = { ...next.highlight, text: p["text"] as string };
      }
      break;
    case "LEAVE":
      next.highlight = null;
      break;
    case "AMBIENT_ON":
      next.ambient = true;
      break;
    case "AMBIENT_OFF":
      next.ambient = false;
      break;
    case "BUSY_TICK":
      next.pending = true;
      next.busyTicks = p["n"] as number;
      break;
    case "ANSWER":
      next.pending = false;
      next.busyTicks = 0;
      break;
    case "NAV_STEP":
      next.guidance = {
        mode: "street_by_street",
        banner: p["text"] as string,
        step: p["step"] as number,
        of: p["of"] as number,
        destination: p["destination"] as string | undefined,
        rerouted: false,
      };
      next.arrivalChime = false;
      break;
    case "NAV_REROUTE":
      next.guidance = {
        mode: "street_by_street",
        banner: p["text"] as string,
        destination: p["destination"] as string | undefined,
        rerouted: true,
      };
      break;
    case "NAV_ARRIVED":
    case "BEACON_ARRIVED":
      next.guidance = null;
      next.arrivalChime = true;
      break;
    case "BEACON_CUE":
      next.guidance = {
        mode: "fly_me_there",
        target: p["target"] as string,
        direction: p["direction"] as string,
        distanceM: p["distance_m"] as number,
      };
      next.arrivalChime = false;
      break;
    case "ERROR":
      next.errors = [...state.errors, p["message"] as string];
      next.pending = false;
      next.busyTicks = 0;
      break;
  }
  return next;
}

export function applyEvents(state: ViewState, events: WireEvent[]): ViewState {
  return events.reduce(applyEvent, state);
}
